use proptest::prelude::*;
use topoforce::opens::{frac, int, Endpoint, OpenSet, Rat};
use topoforce::reals::{in_cut_x, FundamentalSeq};
use topoforce::suites::Gen;
use topoforce::syntax::{parse_context, parse_formula, parse_term, SymbolTable};
use topoforce::terms::{ground_equal, Term};
use topoforce::{forcing_settle, Context, Formula, Semantics};

/// Raw intervals with endpoints in quarter units, `None` for an infinite end.
type Raw = Vec<(Option<i64>, Option<i64>)>;

fn raw_strategy() -> impl Strategy<Value = Raw> {
    prop::collection::vec(
        (prop::option::weighted(0.9, -12i64..=12), prop::option::weighted(0.9, -12i64..=12)),
        0..4,
    )
}

fn to_open(raw: &Raw) -> OpenSet {
    OpenSet::normalize(
        raw.iter()
            .map(|(lo, hi)| {
                (
                    lo.map_or(Endpoint::NegInf, |q| Endpoint::Fin(frac(q, 4))),
                    hi.map_or(Endpoint::PosInf, |q| Endpoint::Fin(frac(q, 4))),
                )
            })
            .collect(),
    )
}

/// Membership decided from the raw intervals, without normalizing.
fn raw_contains(raw: &Raw, r: &Rat) -> bool {
    raw.iter().any(|(lo, hi)| {
        lo.is_none_or(|q| frac(q, 4) < *r) && hi.is_none_or(|q| *r < frac(q, 4))
    })
}

/// Eighths in `[−4, 4]`: every quarter-unit endpoint and every gap midpoint.
fn samples() -> Vec<Rat> {
    (-32..=32).map(|i| frac(i, 8)).collect()
}

/// `r` lies in the interior of `{x : x ∉ a or x ∈ b}`. Critical points are
/// quarters, so `P` is constant on each side of `r` within distance 1/8.
fn implies_oracle(a: &Raw, b: &Raw, r: &Rat) -> bool {
    let p = |x: &Rat| !raw_contains(a, x) || raw_contains(b, x);
    let d = frac(1, 16);
    p(r) && p(&(r - &d)) && p(&(r + &d))
}

proptest! {
    #[test]
    fn normalize_preserves_membership(a in raw_strategy()) {
        let o = to_open(&a);
        for r in samples() {
            prop_assert_eq!(o.contains(&r), raw_contains(&a, &r), "{}", r);
        }
        prop_assert_eq!(OpenSet::normalize(o.intervals().to_vec()), o);
    }

    #[test]
    fn meet_and_join_are_pointwise(a in raw_strategy(), b in raw_strategy()) {
        let (oa, ob) = (to_open(&a), to_open(&b));
        let (m, j) = (oa.intersect(&ob), oa.union(&ob));
        for r in samples() {
            prop_assert_eq!(m.contains(&r), raw_contains(&a, &r) && raw_contains(&b, &r));
            prop_assert_eq!(j.contains(&r), raw_contains(&a, &r) || raw_contains(&b, &r));
        }
    }

    #[test]
    fn lattice_laws(a in raw_strategy(), b in raw_strategy(), c in raw_strategy()) {
        let (a, b, c) = (to_open(&a), to_open(&b), to_open(&c));
        prop_assert_eq!(a.intersect(&b), b.intersect(&a));
        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert_eq!(a.intersect(&b).intersect(&c), a.intersect(&b.intersect(&c)));
        prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
        prop_assert_eq!(a.union(&a.intersect(&b)), a.clone());
        prop_assert_eq!(a.intersect(&a.union(&b)), a.clone());
        prop_assert_eq!(a.intersect(&b.union(&c)), a.intersect(&b).union(&a.intersect(&c)));
        prop_assert_eq!(a.intersect(&OpenSet::real_line()), a.clone());
        prop_assert_eq!(a.union(&OpenSet::empty()), a.clone());
    }

    #[test]
    fn implication_matches_sampling_oracle(a in raw_strategy(), b in raw_strategy()) {
        let imp = to_open(&a).heyting_implies(&to_open(&b));
        for r in samples() {
            prop_assert_eq!(imp.contains(&r), implies_oracle(&a, &b, &r), "{}", r);
        }
    }

    #[test]
    fn heyting_adjunction(a in raw_strategy(), b in raw_strategy(), c in raw_strategy()) {
        let (a, b, c) = (to_open(&a), to_open(&b), to_open(&c));
        prop_assert_eq!(c.intersect(&a).subset(&b), c.subset(&a.heyting_implies(&b)));
        prop_assert!(a.heyting_implies(&a).is_real_line());
        prop_assert!(a.intersect(&a.heyting_implies(&b)).subset(&b));
    }

    #[test]
    fn in_cut_is_downward_closed_and_monotone(p in -40i64..40, q in 1i64..6, x in -60i64..60, y in -60i64..60, m in 0u64..12) {
        let s = FundamentalSeq::constant(frac(p, q));
        let (lo, hi) = if x <= y { (frac(x, 4), frac(y, 4)) } else { (frac(y, 4), frac(x, 4)) };
        prop_assert!(!in_cut_x(&hi, &s, m) || in_cut_x(&lo, &s, m));
        prop_assert!(!in_cut_x(&lo, &s, m) || in_cut_x(&lo, &s, m + 1));
        let t = FundamentalSeq::recip_succ();
        prop_assert!(!in_cut_x(&hi, &t, m) || in_cut_x(&lo, &t, m));
        prop_assert!(!in_cut_x(&lo, &t, m) || in_cut_x(&lo, &t, m + 1));
    }
}

fn has_atom(t: &Term) -> bool {
    t.is_atom()
        || t.open_entries().iter().any(|(c, _)| has_atom(c))
        || t.settled_entries().iter().any(|(c, _)| has_atom(c))
}

/// A point of the cell `(lo, hi)` other than its representative.
fn other_point(lo: &Endpoint, hi: &Endpoint, rep: &Rat) -> Rat {
    match (lo.finite(), hi.finite()) {
        (Some(a), _) => (a + rep) / int(2),
        (None, Some(b)) => (b + rep) / int(2) - int(7),
        (None, None) => rep + int(5),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn settling_is_idempotent_and_fixes_ground(seed in any::<u64>(), r in -12i64..12, s in -12i64..12) {
        let mut gen = Gen::new(seed).with_settled(true);
        let t = gen.term(3);
        let (r, s) = (frac(r, 4), frac(s, 4));
        let once = t.settle(&r);
        prop_assert!(once.is_ground());
        prop_assert_eq!(once.settle(&s), once.clone());
        let g = Gen::new(seed).ground_only(true).term(3);
        prop_assert_eq!(g.settle(&r), g);
    }

    #[test]
    fn settling_is_constant_on_cells(seed in any::<u64>()) {
        let mut gen = Gen::new(seed).with_settled(true);
        let t = gen.term(3);
        for c in t.partition().cells() {
            let other = other_point(&c.lo, &c.hi, &c.rep);
            prop_assert!(c.as_open().contains(&other));
            prop_assert_eq!(t.settle(&c.rep), t.settle(&other), "cell ({} {})", c.lo, c.hi);
        }
    }

    #[test]
    fn representative_choice_is_irrelevant(seed in any::<u64>()) {
        let mut gen = Gen::new(seed).with_settled(true);
        let params: Vec<Term> = (0..3).map(|_| gen.term(2)).collect();
        let phi = gen.sentence(&params, 3);
        let ctx = gen.context(2, 1);
        for c in phi.partition().cells() {
            let other = other_point(&c.lo, &c.hi, &c.rep);
            let (a, b) = (phi.settle(&c.rep), phi.settle(&other));
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(forcing_settle::settled_truth(&phi, &ctx).contains(&other),
                forcing_settle::value3(&a, &ctx).is_real_line());
        }
    }

    #[test]
    fn value_is_shift_equivariant(seed in any::<u64>(), d in -8i64..8) {
        let mut gen = Gen::new(seed).with_settled(true);
        let params: Vec<Term> = (0..3).map(|_| gen.term(2)).collect();
        let domain: Vec<Term> = (0..2).map(|_| gen.term(1)).collect();
        prop_assume!(!params.iter().chain(&domain).any(has_atom));
        let phi = gen.sentence(&params, 3);
        let d = frac(d, 2);
        let ctx = Context::with_terms(domain.clone());
        let shifted = Context::with_terms(domain.iter().map(|t| t.shift(&d)).collect());
        for sem in [Semantics::Std, Semantics::Settle] {
            prop_assert_eq!(sem.value(&phi.shift(&d), &shifted), sem.value(&phi, &ctx).shift(&d), "{}", sem);
        }
    }

    #[test]
    fn equality_regions_compose(seed in any::<u64>()) {
        let mut gen = Gen::new(seed).with_settled(true);
        let (a, b, c) = (gen.term(2), gen.term(2), gen.term(2));
        let b2 = gen.perturb(&a);
        for sem in [Semantics::Std, Semantics::Settle] {
            for (x, y, z) in [(&a, &b, &c), (&a, &b2, &c), (&a, &b2, &b)] {
                let lhs = sem.max_eq(x, y).intersect(&sem.max_eq(y, z));
                prop_assert!(lhs.subset(&sem.max_eq(x, z)), "{} {} {} {}", sem, x, y, z);
            }
        }
    }

    #[test]
    fn forced_equality_survives_settling(seed in any::<u64>()) {
        let mut gen = Gen::new(seed).with_settled(true);
        let a = gen.term(2);
        let b = gen.perturb(&a);
        let region = forcing_settle::max_eq3(&a, &b);
        let pts = a.partition().points().iter().chain(b.partition().points()).cloned().collect::<Vec<_>>();
        let part = topoforce::opens::Partition::new(pts);
        for s in part.representatives_within(&region) {
            prop_assert!(ground_equal(&a.settle(&s), &b.settle(&s)).unwrap(), "{} {} at {}", a, b, s);
        }
    }

    #[test]
    fn settled_truth_contains_the_value(seed in any::<u64>()) {
        let mut gen = Gen::new(seed).with_settled(true);
        let params: Vec<Term> = (0..3).map(|_| gen.term(2)).collect();
        let phi = gen.sentence(&params, 3);
        // Soundness needs a ground quantifier domain: a non-ground witness
        // is not settled along with the sentence.
        let mut ground = Gen::new(seed ^ 1).ground_only(true);
        let ctx = Context::with_terms((0..3).map(|_| ground.term(2)).collect());
        let v = forcing_settle::value3(&phi, &ctx);
        let truth = forcing_settle::settled_truth(&phi, &ctx);
        for r in phi.partition().representatives_within(&v) {
            prop_assert!(truth.contains(&r), "{} at {}", phi, r);
        }
    }

    #[test]
    fn display_round_trips(seed in any::<u64>()) {
        let mut gen = Gen::new(seed).with_settled(true);
        let none = SymbolTable::new();
        let params: Vec<Term> = (0..3).map(|_| gen.term(3)).collect();
        for t in &params {
            prop_assert_eq!(&parse_term(&t.to_string(), &none).unwrap(), t);
        }
        let phi: Formula = gen.sentence(&params, 4);
        prop_assert_eq!(parse_formula(&phi.to_string(), &none).unwrap(), phi);
        let ctx = gen.context(3, 2);
        let (_, back) = parse_context(&ctx.to_string()).unwrap();
        prop_assert_eq!(back, ctx);
    }
}
