//! Degree laws, rule-algebra laws and dual-block inequalities on random
//! onto rules of small full shifts.

mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resolvekit::construct::dual_block_endo;
use resolvekit::degree::{degrees, strict_left_mergibility, strict_right_mergibility, DegreeReport, Ext};
use resolvekit::limits::limit_estimates;
use resolvekit::rule::{compose, Endomorphism};

fn endo(seed: u64, max_windows: usize) -> Endomorphism {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (k, m, n) = random_shape(&mut rng, max_windows);
    Endomorphism::new(random_onto_rule(&mut rng, k, m, n)).unwrap()
}

fn quad(d: &DegreeReport) -> (Ext, Ext, Ext, Ext) {
    (Ext::Fin(d.p_l), Ext::Fin(d.p_r), d.q_r, d.q_l)
}

fn plus(x: Ext, s: i64) -> Ext {
    x + Ext::Fin(s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn shift_laws(seed in any::<u64>(), s in -2i64..=2) {
        let e = endo(seed, 27);
        let d = degrees(&e).unwrap();
        let ds = degrees(&e.shift_compose(s)).unwrap();
        prop_assert_eq!(
            quad(&ds),
            (Ext::Fin(d.p_l + s), Ext::Fin(d.p_r - s), plus(d.q_r, s), plus(d.q_l, -s))
        );
    }

    #[test]
    fn shift_composition_adds(seed in any::<u64>(), s in -2i64..=2, t in -2i64..=2) {
        let e = endo(seed, 27);
        let a = e.shift_compose(s).shift_compose(t);
        let b = e.shift_compose(s + t);
        prop_assert!(a.rule().canonical().0.same_map(&b.rule().canonical().0));
    }

    #[test]
    fn superadditivity(seed in any::<u64>(), s in 1usize..=2, t in 1usize..=2) {
        let e = endo(seed, 9);
        let ds = degrees(&e.power(s).unwrap()).unwrap();
        let dt = degrees(&e.power(t).unwrap()).unwrap();
        let dst = degrees(&e.power(s + t).unwrap()).unwrap();
        let (a, b, c) = (quad(&ds), quad(&dt), quad(&dst));
        prop_assert!(c.0 >= a.0 + b.0 && c.1 >= a.1 + b.1 && c.2 >= a.2 + b.2 && c.3 >= a.3 + b.3);
    }

    #[test]
    fn composition_bounds(seed in any::<u64>(), other in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (k, m, n) = random_shape(&mut rng, 9);
        let f = random_onto_rule(&mut rng, k, m, n);
        let mut rng2 = ChaCha8Rng::seed_from_u64(other);
        let (m2, n2) = (rng2.gen_range(0..=1usize), rng2.gen_range(0..=1usize));
        let g = random_onto_rule(&mut rng2, k, m2, n2);
        let df = quad(&degrees(&Endomorphism::new(f.clone()).unwrap()).unwrap());
        let dg = quad(&degrees(&Endomorphism::new(g.clone()).unwrap()).unwrap());
        let dgf = quad(&degrees(&Endomorphism::new(compose(&f, &g).unwrap()).unwrap()).unwrap());
        prop_assert!(dgf.0 >= df.0 + dg.0 && dgf.1 >= df.1 + dg.1);
        prop_assert!(dgf.2 >= df.2 + dg.2 && dgf.3 >= df.3 + dg.3);
    }

    #[test]
    fn sign_laws(seed in any::<u64>()) {
        let e = endo(seed, 27);
        let d = degrees(&e).unwrap();
        let (m, n) = (e.rule().memory() as i64, e.rule().anticipation() as i64);
        prop_assert!(d.p_l + d.p_r <= 0);
        prop_assert!(-n <= d.p_r && d.p_r <= -d.p_l && -d.p_l <= m);
        prop_assert!(plus(d.q_l, d.p_l) <= Ext::Fin(0));
        prop_assert!(plus(d.q_r, d.p_r) <= Ext::Fin(0));
    }

    #[test]
    fn padding_shifts_strict_values(seed in any::<u64>(), a in 0usize..=2, b in 0usize..=2) {
        let e = endo(seed, 27);
        let r = e.rule();
        let p = r.pad(a, b);
        let (d, dp) = (degrees(&e).unwrap(), degrees(&Endomorphism::new(p.clone()).unwrap()).unwrap());
        prop_assert_eq!(quad(&d), quad(&dp));
        prop_assert_eq!((dp.i, dp.j), (d.i + a, d.j + b));
        prop_assert_eq!(strict_right_mergibility(&p), strict_right_mergibility(r).map(|k| k + b));
        prop_assert_eq!(strict_left_mergibility(&p), strict_left_mergibility(r).map(|l| l + a));
    }

    #[test]
    fn higher_block_invariance(seed in any::<u64>()) {
        let e = endo(seed, 9);
        let d = degrees(&e).unwrap();
        let h = degrees(&e.higher_block(2).unwrap()).unwrap();
        prop_assert_eq!(quad(&d), quad(&h));
    }

    #[test]
    fn power_system_inequality(seed in any::<u64>(), s in 1usize..=3) {
        let e = endo(seed, 9);
        let d = degrees(&e).unwrap();
        let ps = degrees(&e.power_system(s).unwrap()).unwrap();
        let times = |x: Ext| match x { Ext::Fin(v) => Ext::Fin(v * s as i64), Ext::NegInf => Ext::NegInf };
        prop_assert!(d.q_r >= times(ps.q_r) && d.q_l >= times(ps.q_l));
    }

    #[test]
    fn composition_is_associative(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let rule = |seed: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (m, n) = (rng.gen_range(0..=1usize), rng.gen_range(0..=1usize));
            random_onto_rule(&mut rng, 2, m, n)
        };
        let (f, g, h) = (rule(a), rule(b), rule(c));
        let left = compose(&compose(&f, &g).unwrap(), &h).unwrap();
        let right = compose(&f, &compose(&g, &h).unwrap()).unwrap();
        prop_assert!(left.same_map(&right));
    }

    #[test]
    fn limit_bounds_grow_with_the_power_range(seed in any::<u64>()) {
        let e = endo(seed, 8);
        let a = limit_estimates(&e, 2).unwrap();
        let b = limit_estimates(&e, 3).unwrap();
        prop_assert!(b.p_l.lower_bound >= a.p_l.lower_bound && b.p_r.lower_bound >= a.p_r.lower_bound);
        prop_assert!(b.q_r.lower_bound >= a.q_r.lower_bound && b.q_l.lower_bound >= a.q_l.lower_bound);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dual_block_inequalities(seed in any::<u64>(), s in 1usize..=2) {
        let e = endo(seed, 8);
        let ds = degrees(&e.power(s).unwrap()).unwrap();
        let star = degrees(&dual_block_endo(&e, s).unwrap().endomorphism).unwrap();
        let next = degrees(&dual_block_endo(&e, s + 1).unwrap().endomorphism).unwrap();
        let zero = Ext::Fin(0);
        if ds.p_l >= 0 { prop_assert!(star.p_l >= 0); }
        if ds.p_r >= 0 { prop_assert!(star.p_r >= 0); }
        if ds.q_r >= zero { prop_assert!(star.q_r >= zero); } else { prop_assert!(star.q_r >= ds.q_r); }
        if ds.q_l >= zero { prop_assert!(star.q_l >= zero); } else { prop_assert!(star.q_l >= ds.q_l); }
        if star.p_l >= 0 { prop_assert!(next.p_l >= 0); }
        if star.p_r >= 0 { prop_assert!(next.p_r >= 0); }
        prop_assert!(star.q_r <= next.q_r && star.q_l <= next.q_l);
    }

    #[test]
    fn dual_block_is_conjugate_on_periodic_points(seed in any::<u64>(), s in 2usize..=3) {
        // the stacks of a periodic point move like the point itself
        let e = endo(seed, 8);
        let d = dual_block_endo(&e, s).unwrap();
        prop_assert_eq!(d.endomorphism.onto(), e.onto());
        let dg = d.endomorphism.graph();
        for p in 1..=3 {
            let n_star = dg.closed_paths(p).len();
            let n = e.graph().closed_paths(p).len();
            prop_assert_eq!(n_star, n);
        }
    }
}
