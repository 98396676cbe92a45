use proptest::prelude::*;
use sseq_core::rational::Rational;
use sseq_core::vline::{combine_cofiber, VlParams};

/// Independent exact fraction with i128 parts, always reduced, positive denominator.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Frac(i128, i128);

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

impl Frac {
    fn new(n: i128, d: i128) -> Frac {
        let g = gcd(n, d);
        let s = if d < 0 { -1 } else { 1 };
        Frac(s * n / g, s * d / g)
    }
    fn of(r: Rational) -> Frac {
        Frac::new((*r.numer()).into(), (*r.denom()).into())
    }
    fn add(self, o: Frac) -> Frac {
        Frac::new(self.0 * o.1 + o.0 * self.1, self.1 * o.1)
    }
    fn sub(self, o: Frac) -> Frac {
        self.add(Frac(-o.0, o.1))
    }
    fn div(self, o: Frac) -> Frac {
        Frac::new(self.0 * o.1, self.1 * o.0)
    }
    fn lt(self, o: Frac) -> bool {
        self.0 * o.1 < o.0 * self.1
    }
    fn max(self, o: Frac) -> Frac {
        if self.lt(o) { o } else { self }
    }
    fn min(self, o: Frac) -> Frac {
        if self.lt(o) { self } else { o }
    }
    fn floor(self) -> i128 {
        self.0.div_euclid(self.1)
    }
    fn int(n: i128) -> Frac {
        Frac(n, 1)
    }
}

fn q() -> impl Strategy<Value = Rational> {
    (-40i64..40, prop::sample::select(vec![1i64, 2, 3, 5, 10])).prop_map(|(n, d)| Rational::new(n, d))
}

fn slope() -> impl Strategy<Value = Rational> {
    prop::sample::select(vec![(0, 1), (1, 5), (1, 4), (1, 3), (2, 5), (9, 20)]).prop_map(|(n, d)| Rational::new(n, d))
}

fn params_with(m: Rational) -> impl Strategy<Value = VlParams> {
    (q(), q(), q(), q(), 1u32..6).prop_map(move |(x, y, v, c, r)| {
        let (b, d) = if x <= y { (x, y) } else { (y, x) };
        VlParams::new(b, d, v, m, c, r).unwrap()
    })
}

fn params() -> impl Strategy<Value = VlParams> {
    slope().prop_flat_map(params_with)
}

fn pair() -> impl Strategy<Value = (VlParams, VlParams)> {
    slope().prop_flat_map(|m| (params_with(m), params_with(m)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn suspension_is_a_group_action(p in params(), a in -30i32..30, b in -30i32..30, c in -30i32..30, d in -30i32..30) {
        prop_assert_eq!(p.suspend(a, b).suspend(-a, -b), p);
        prop_assert_eq!(p.suspend(a, b).suspend(c, d), p.suspend(a + c, b + d));
        prop_assert_eq!(p.suspend(0, 0), p);
    }

    #[test]
    fn combine_matches_oracle((a, c) in pair()) {
        let out = combine_cofiber(&a, &c).unwrap();
        let f = Frac::of;
        let ra = Frac::int(a.r.into());
        let rc = Frac::int(c.r.into());
        let b = f(a.b).min(f(c.b).sub(ra));
        let d = f(a.d).max(f(c.d));
        let cc = f(a.c).add(ra).max(f(c.c));
        let half_minus_m = Frac::new(1, 2).sub(f(a.m));
        let v = f(a.v).add(Frac::int(1)).max(f(c.v)).max(cc.sub(b).div(half_minus_m));
        let spread = f(a.d).max(f(a.d).add(rc).min(f(c.d))).sub(f(c.b)).sub(Frac::new(1, 2)).floor();
        let r = i128::from(a.r) + i128::from(c.r).max(spread);
        prop_assert_eq!(f(out.b), b);
        prop_assert_eq!(f(out.d), d);
        prop_assert_eq!(f(out.c), cc);
        prop_assert_eq!(f(out.v), v);
        prop_assert_eq!(i128::from(out.r), r);
        prop_assert!(out.b <= out.d);
        prop_assert!(out.r >= a.r + c.r);
    }

    #[test]
    fn combine_commutes_with_suspension((a, c) in pair(), n in -10i32..10, s in -10i32..10) {
        let direct = combine_cofiber(&a, &c).unwrap().suspend(n, s);
        let moved = combine_cofiber(&a.suspend(n, s), &c.suspend(n, s)).unwrap();
        prop_assert_eq!((direct.b, direct.d, direct.r), (moved.b, moved.d, moved.r));
    }

    #[test]
    fn dominance_is_a_partial_order(x in params(), y in params(), z in params()) {
        prop_assert!(x.dominates(&x));
        if x.dominates(&y) && y.dominates(&x) {
            prop_assert_eq!(x, y);
        }
        if x.dominates(&y) && y.dominates(&z) {
            prop_assert!(x.dominates(&z));
        }
    }

    #[test]
    fn text_round_trip(p in params()) {
        let back: VlParams = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }
}
