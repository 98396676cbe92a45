fn main() -> std::process::ExitCode {
    sseq_tools::cli::main()
}
