//! 2-primary K(1)-local homotopy bookkeeping.
//!
//! Groups are finitely generated modules over the 2-adic integers, recorded as
//! a multiset of cyclic exponents plus a free rank. The K(1)-local sphere is
//! computed from the fiber sequence `L S -> KO -(1 - ψ⁵)-> KO`, and the Moore
//! spectrum from the cofiber sequence of multiplication by 2.

use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum K1Error {
    ZeroValuation,
    /// Degrees where the free summands in stems -1 and 0 enter the
    /// computation; only the periodic table is modelled.
    Unsupported(i64),
}

impl fmt::Display for K1Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            K1Error::ZeroValuation => f.write_str("2-adic valuation of zero"),
            K1Error::Unsupported(i) => {
                write!(f, "degree {i} is outside the periodic range")
            }
        }
    }
}

impl core::error::Error for K1Error {}

pub fn val2(n: i64) -> Result<u32, K1Error> {
    if n == 0 {
        Err(K1Error::ZeroValuation)
    } else {
        Ok(n.trailing_zeros())
    }
}

/// `v₂(5^m - 1)` for `m != 0`; negative `m` is read in the 2-adic integers.
///
/// Computed modulo `2^64`, which is exact because the answer is below 64 for
/// every `i64` exponent.
pub fn val2_five_power_minus_one(m: i64) -> Result<u32, K1Error> {
    if m == 0 {
        return Err(K1Error::ZeroValuation);
    }
    let e = m.unsigned_abs();
    let mut acc: u64 = 1;
    let mut base: u64 = 5;
    let mut rest = e;
    while rest > 0 {
        if rest & 1 == 1 {
            acc = acc.wrapping_mul(base);
        }
        base = base.wrapping_mul(base);
        rest >>= 1;
    }
    Ok(acc.wrapping_sub(1).trailing_zeros())
}

/// `⊕ Z/2^{e} ⊕ Z₂^{free_rank}`. Exponents are kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TwoLocalGroup {
    torsion_exponents: Vec<u32>,
    free_rank: u32,
}

impl TwoLocalGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn cyclic(exponent: u32) -> Self {
        Self::new(alloc::vec![exponent], 0)
    }

    pub fn free(rank: u32) -> Self {
        Self::new(Vec::new(), rank)
    }

    /// Exponent-0 entries are trivial summands and are dropped.
    pub fn new(mut torsion_exponents: Vec<u32>, free_rank: u32) -> Self {
        torsion_exponents.retain(|&e| e > 0);
        torsion_exponents.sort_unstable();
        TwoLocalGroup {
            torsion_exponents,
            free_rank,
        }
    }

    pub fn torsion_exponents(&self) -> &[u32] {
        &self.torsion_exponents
    }

    pub fn free_rank(&self) -> u32 {
        self.free_rank
    }

    pub fn is_zero(&self) -> bool {
        self.torsion_exponents.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Number of cyclic (torsion) summands.
    pub fn cyclic_count(&self) -> u32 {
        self.torsion_exponents.len() as u32
    }

    /// `log₂` of the order, or `None` when infinite.
    pub fn log2_order(&self) -> Option<u32> {
        self.is_finite().then(|| self.torsion_exponents.iter().sum())
    }

    /// `None` when infinite or not representable in a `u64`.
    pub fn order(&self) -> Option<u64> {
        self.log2_order().and_then(|e| 1u64.checked_shl(e))
    }

    pub fn direct_sum(&self, other: &TwoLocalGroup) -> TwoLocalGroup {
        let mut exps = self.torsion_exponents.clone();
        exps.extend_from_slice(&other.torsion_exponents);
        TwoLocalGroup::new(exps, self.free_rank + other.free_rank)
    }

    /// `|coker(2)|`: one factor of 2 per cyclic or free summand.
    pub fn coker_two_log2(&self) -> u32 {
        self.cyclic_count() + self.free_rank
    }

    /// `|ker(2)|`: one factor of 2 per cyclic summand.
    pub fn ker_two_log2(&self) -> u32 {
        self.cyclic_count()
    }

    /// Machine format: `2^1+2^2+Z2^1`, or `0`.
    pub fn machine(&self) -> alloc::string::String {
        use core::fmt::Write;
        let mut out = alloc::string::String::new();
        for e in &self.torsion_exponents {
            if !out.is_empty() {
                out.push('+');
            }
            let _ = write!(out, "2^{e}");
        }
        if self.free_rank > 0 {
            if !out.is_empty() {
                out.push('+');
            }
            let _ = write!(out, "Z2^{}", self.free_rank);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// `Z/2 + Z/4 + Z_2`, or `0`.
impl fmt::Display for TwoLocalGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            if first {
                first = false;
                Ok(())
            } else {
                f.write_str(" + ")
            }
        };
        for e in &self.torsion_exponents {
            sep(f)?;
            match 1u64.checked_shl(*e) {
                Some(n) if *e < 64 => write!(f, "Z/{n}")?,
                _ => write!(f, "Z/2^{e}")?,
            }
        }
        for _ in 0..self.free_rank {
            sep(f)?;
            f.write_str("Z_2")?;
        }
        Ok(())
    }
}

/// Action of the Adams operation ψ⁵ on one homotopy group of 2-complete KO.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsiAction {
    /// Multiplication by `5^e` on a rank-one free module.
    Multiply { power_of_five: i64 },
    Identity,
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoGroup {
    pub group: TwoLocalGroup,
    pub psi: PsiAction,
}

/// `π_i KO` with the ψ⁵ action; in degree `4j` ψ⁵ acts by `5^{2j}`.
pub fn ko_homotopy(i: i64) -> KoGroup {
    match i.rem_euclid(8) {
        0 | 4 => KoGroup {
            group: TwoLocalGroup::free(1),
            psi: PsiAction::Multiply {
                power_of_five: i / 2,
            },
        },
        1 | 2 => KoGroup {
            group: TwoLocalGroup::cyclic(1),
            psi: PsiAction::Identity,
        },
        _ => KoGroup {
            group: TwoLocalGroup::zero(),
            psi: PsiAction::Zero,
        },
    }
}

/// Kernel and cokernel of `1 - ψ⁵` on `π_i KO`.
pub fn one_minus_psi(i: i64) -> (TwoLocalGroup, TwoLocalGroup) {
    let KoGroup { group, psi } = ko_homotopy(i);
    match psi {
        PsiAction::Zero => (TwoLocalGroup::zero(), TwoLocalGroup::zero()),
        PsiAction::Identity => (group.clone(), group),
        PsiAction::Multiply { power_of_five: 0 } => (group.clone(), group),
        PsiAction::Multiply { power_of_five } => {
            let e = val2_five_power_minus_one(power_of_five).expect("nonzero exponent");
            (TwoLocalGroup::zero(), TwoLocalGroup::cyclic(e))
        }
    }
}

/// One degree of a short exact sequence `0 -> sub -> group -> quotient -> 0`
/// with its resolved extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolved {
    pub degree: i64,
    pub sub: TwoLocalGroup,
    pub quotient: TwoLocalGroup,
    pub group: TwoLocalGroup,
    /// How the extension was settled, when there was one to settle.
    pub note: Option<&'static str>,
}

const SPHERE_SPLIT_NOTE: &str = "split: a 2-extension would force eta times the top class to vanish, \
     but that product is nonzero";
const SPHERE_ZERO_NOTE: &str = "split: the torsion class is detected by the image of J";

/// `π_i L_{K(1)} S` from `0 -> coker(1-ψ⁵ on π_{i+1}) -> π_i -> ker(1-ψ⁵ on π_i) -> 0`.
pub fn k1_sphere_resolved(i: i64) -> Resolved {
    let (_, sub) = one_minus_psi(i + 1);
    let (quotient, _) = one_minus_psi(i);
    let note = if sub.is_zero() || quotient.is_zero() {
        None
    } else if i == 0 {
        Some(SPHERE_ZERO_NOTE)
    } else {
        Some(SPHERE_SPLIT_NOTE)
    };
    Resolved {
        degree: i,
        group: sub.direct_sum(&quotient),
        sub,
        quotient,
        note,
    }
}

pub fn k1_sphere(i: i64) -> TwoLocalGroup {
    k1_sphere_resolved(i).group
}

/// Order of `π_i` of the cofiber of 2 from `lower = π_i` and `upper = π_{i-1}`:
/// `|coker(2 on lower)| · |ker(2 on upper)|`.
pub fn les_mult2_order(lower: &TwoLocalGroup, upper: &TwoLocalGroup) -> u64 {
    1u64 << (lower.coker_two_log2() + upper.ker_two_log2())
}

/// Representative degree for a residue, one period above the non-periodic range.
fn generic_degree(residue: usize) -> i64 {
    8 + residue as i64
}

/// Orders of `π_{8k+j} L_{K(1)} C(2)` for `j = 0..8`, `k` large.
pub fn moore_orders() -> [u64; 8] {
    core::array::from_fn(|j| {
        let i = generic_degree(j);
        les_mult2_order(&k1_sphere(i), &k1_sphere(i - 1))
    })
}

/// Residues where the middle term is a non-split extension: one `Z/2` from
/// each side merges into a `Z/4`.
const MOORE_NONSPLIT: [(usize, &str); 2] = [
    (1, "one 2-extension, visible in the Adams chart inside the band"),
    (2, "one 2-extension, as in degree 8k+1"),
];

const MOORE_SPLIT: [(usize, &str); 2] = [
    (0, "split: settled in degree 0 and carried to every 8k by periodicity"),
    (3, "split: eta multiplication from the 8k+2 column rules out a hidden 2-extension"),
];

/// `π_i L_{K(1)} C(2)` with sub `coker(2 on π_i S)` and quotient
/// `ker(2 on π_{i-1} S)`, both elementary abelian.
pub fn moore_group(i: i64) -> Result<Resolved, K1Error> {
    if (-1..=1).contains(&i) {
        return Err(K1Error::Unsupported(i));
    }
    let lower = k1_sphere(i);
    let upper = k1_sphere(i - 1);
    let sub = TwoLocalGroup::new(alloc::vec![1; lower.coker_two_log2() as usize], 0);
    let quotient = TwoLocalGroup::new(alloc::vec![1; upper.ker_two_log2() as usize], 0);
    let residue = i.rem_euclid(8) as usize;
    let nonsplit = MOORE_NONSPLIT.iter().find(|(r, _)| *r == residue);
    let (group, note) = match nonsplit {
        Some((_, note)) => {
            let mut exps: Vec<u32> = alloc::vec![1; (sub.cyclic_count() + quotient.cyclic_count()) as usize];
            exps.pop();
            exps[0] = 2;
            (TwoLocalGroup::new(exps, 0), Some(*note))
        }
        None => {
            let note = if sub.is_zero() || quotient.is_zero() {
                None
            } else {
                MOORE_SPLIT.iter().find(|(r, _)| *r == residue).map(|(_, n)| *n)
            };
            (sub.direct_sum(&quotient), note)
        }
    };
    Ok(Resolved {
        degree: i,
        sub,
        quotient,
        group,
        note,
    })
}

/// Residue-indexed `π_{8k+j} L_{K(1)} C(2)` for large `k`.
pub fn moore_groups() -> [Resolved; 8] {
    core::array::from_fn(|j| moore_group(generic_degree(j)).expect("generic degree"))
}

/// Exactness of `A -> B -> C` forces `|B| <= |A|·|C|`.
pub fn les_order_bound(left: u64, middle: u64, right: u64) -> bool {
    u128::from(middle) <= u128::from(left) * u128::from(right)
}
