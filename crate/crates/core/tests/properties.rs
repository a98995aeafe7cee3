use std::sync::Arc;

use num_complex::Complex;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::sample::subsequence;

use lgcoh::cealg::{ce_differential, library, RepresentationData};
use lgcoh::divisor::{act, GRat, LogPointElement, MeromorphicSection, ScalingArrow};
use lgcoh::exactalg::{
    homology, is_unimodular, rat, smith_normal_form, Hom, IntMatrix, MixedModule, Rat, RatMatrix,
};
use lgcoh::extend::{build_central_extension, extension_class, ExtensionSpec};
use lgcoh::forms::{Chart, LaurentMap, LaurentPoly, PrimitiveStrategy, SymbolicForm};
use lgcoh::periods::{period, Cycle2, CycleShape, NumericForm};
use lgcoh::vanest::{check_cocycle, CoordGroupSpec};

fn poly_strategy(nvars: usize, min_exp: i32) -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(min_exp..=2i32, nvars), -4i64..=4), 0..=3).prop_map(move |terms| {
        terms
            .into_iter()
            .fold(LaurentPoly::zero(nvars), |acc, (e, c)| acc.add(&LaurentPoly::monomial(e, rat(c))))
    })
}

fn form_strategy(chart: Arc<Chart>, degree: usize, min_exp: i32) -> impl Strategy<Value = SymbolicForm> {
    let n = chart.dim();
    prop::collection::vec((subsequence((0..n).collect::<Vec<_>>(), degree), poly_strategy(n, min_exp)), 1..=3)
        .prop_map(move |terms| {
            terms.into_iter().fold(SymbolicForm::zero(&chart, degree), |acc, (idx, c)| {
                acc.add(&SymbolicForm::term(&chart, c, &idx))
            })
        })
}

fn chart(n: usize) -> Arc<Chart> {
    Chart::new(["t", "u", "v", "w"][..n].iter().copied())
}

fn map_strategy(source: Arc<Chart>, target: Arc<Chart>) -> impl Strategy<Value = LaurentMap> {
    let n = source.dim();
    prop::collection::vec(poly_strategy(n, 0), target.dim())
        .prop_map(move |components| LaurentMap::new(&source, &target, components))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn smith_form_postconditions(r in 1usize..=5, c in 1usize..=5, seed in prop::collection::vec(-15i64..=15, 25)) {
        let a = IntMatrix::from_i64(r, c, &seed[..r * c]);
        let s = smith_normal_form(&a);
        prop_assert_eq!(&(&s.u * &a) * &s.v, s.d.clone());
        prop_assert!(is_unimodular(&s.u) && is_unimodular(&s.v));
        for i in 0..r {
            for j in 0..c {
                prop_assert!(i == j || s.d[(i, j)].is_zero());
            }
        }
        let diag = s.diagonal();
        prop_assert_eq!(diag.len(), s.rank);
        for w in diag.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
        prop_assert!(diag.iter().all(|d| *d > Zero::zero()));
    }

    #[test]
    fn classification_is_invariant_under_automorphisms(
        m in 1usize..=3,
        n in 0usize..=2,
        rels in prop::collection::vec((prop::collection::vec(-6i64..=6, 3), prop::collection::vec((-6i64..=6, 1i64..=3), 2)), 0..=3),
        ops in prop::collection::vec((0usize..3, 0usize..3, -2i64..=2), 0..=6),
        lower in prop::collection::vec((-3i64..=3, 1i64..=2), 4),
    ) {
        let relations: Vec<Vec<Rat>> = rels
            .iter()
            .map(|(l, d)| l[..m].iter().map(|&v| rat(v)).chain(d[..n].iter().map(|&(p, q)| Rat::new(p.into(), q.into()))).collect())
            .collect();
        let module = MixedModule::new(m, n, relations.clone()).unwrap();
        // unimodular lattice change from elementary row operations
        let mut u = RatMatrix::identity(m);
        for &(i, j, k) in &ops {
            let (i, j) = (i % m, j % m);
            if i != j {
                for col in 0..m {
                    let v = &u[(j, col)] * rat(k);
                    u[(i, col)] += v;
                }
            }
        }
        // invertible rational change of the divisible block
        let mut p = RatMatrix::identity(n);
        if n == 2 {
            p[(1, 0)] = Rat::new(lower[0].0.into(), lower[0].1.into());
            p[(0, 1)] = Rat::new(lower[1].0.into(), lower[1].1.into());
            p[(0, 0)] = &p[(0, 0)] + &p[(0, 1)] * &p[(1, 0)];
        }
        if n >= 1 {
            p[(0, 0)] = &p[(0, 0)] * Rat::new(lower[2].1.into(), 1.into());
        }
        let moved: Vec<Vec<Rat>> = relations
            .iter()
            .map(|r| u.mul_vec(&r[..m]).into_iter().chain(p.mul_vec(&r[m..])).collect())
            .collect();
        let image = MixedModule::new(m, n, moved).unwrap();
        prop_assert_eq!(module.classify(), image.classify());
    }

    #[test]
    fn kernel_and_cokernel_are_exact(
        a in 1usize..=3,
        b in 1usize..=3,
        entries in prop::collection::vec(-5i64..=5, 9),
        rels in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 0..=2),
    ) {
        let src = MixedModule::lattice(a);
        let dst = MixedModule::new(b, 0, rels.iter().map(|r| r[..b].iter().map(|&v| rat(v)).collect()).collect()).unwrap();
        let f = Hom::induced(RatMatrix::from_i64(b, a, &entries[..a * b]), &src, &dst).unwrap();
        let (_, inclusion) = f.kernel_with_inclusion();
        prop_assert!(inclusion.compose(&f).is_zero_map());
        prop_assert!(homology(&inclusion, &f).classify().is_trivial());
        prop_assert!(inclusion.kernel().classify().is_trivial());
        let (_, projection) = f.cokernel_with_projection();
        prop_assert!(f.compose(&projection).is_zero_map());
        prop_assert!(homology(&f, &projection).classify().is_trivial());
        prop_assert!(projection.cokernel().classify().is_trivial());
    }

    #[test]
    fn exterior_derivative_squares_to_zero(
        omega in (1usize..=4).prop_flat_map(|n| (0..n).prop_flat_map(move |k| form_strategy(chart(n), k, -2)))
    ) {
        prop_assert!(omega.exterior_d().exterior_d().is_zero());
    }

    #[test]
    fn homotopy_operator_inverts_d(
        eta in (1usize..=3).prop_flat_map(|n| (0..n).prop_flat_map(move |k| form_strategy(chart(n), k, 0)))
    ) {
        let omega = eta.exterior_d();
        prop_assume!(!omega.is_zero());
        for strategy in [PrimitiveStrategy::Radial, PrimitiveStrategy::Iterated] {
            let p = omega.primitive(strategy).unwrap();
            prop_assert_eq!(p.exterior_d(), omega.clone());
        }
    }

    #[test]
    fn pullback_is_functorial_and_commutes_with_d(
        (psi, phi, omega) in (map_strategy(chart(2), chart(3)), map_strategy(chart(3), Chart::new(["x", "y", "z"])))
            .prop_flat_map(|(psi, phi)| {
                let target = phi.target.clone();
                (Just(psi), Just(phi), (0usize..=2).prop_flat_map(move |k| form_strategy(target.clone(), k, 0)))
            })
    ) {
        let composite = psi.then(&phi).unwrap();
        let direct = omega.pullback(&composite).unwrap();
        let stepwise = omega.pullback(&phi).unwrap().pullback(&psi).unwrap();
        prop_assert_eq!(&direct, &stepwise);
        prop_assert_eq!(direct.exterior_d(), omega.exterior_d().pullback(&composite).unwrap());
        prop_assert_eq!(omega.pullback(&LaurentMap::identity(omega.chart())).unwrap(), omega.clone());
    }

    #[test]
    fn ce_differential_squares_to_zero(which in 0usize..6, rep_kind in 0usize..3, shear in -2i64..=2) {
        let (_, g) = library::all()[which % library::all().len()].clone();
        let n = g.dim();
        let mut p = RatMatrix::identity(n);
        if n > 1 {
            p[(0, n - 1)] = rat(shear);
        }
        let g = g.change_basis(&p).unwrap();
        let rep = match rep_kind {
            0 => RepresentationData::trivial(&g, 2),
            1 => RepresentationData::adjoint(&g),
            _ => RepresentationData::coadjoint(&g),
        };
        for k in 0..n {
            prop_assert!((&ce_differential(&g, &rep, k + 1) * &ce_differential(&g, &rep, k)).is_zero());
        }
    }
}

fn grat_strategy() -> impl Strategy<Value = GRat> {
    (-4i64..=4, 1i64..=3, -4i64..=4, 1i64..=3)
        .prop_map(|(a, b, c, d)| Complex::new(Rat::new(a.into(), b.into()), Rat::new(c.into(), d.into())))
}

fn nonzero_grat() -> impl Strategy<Value = GRat> {
    grat_strategy().prop_filter("nonzero", |z| !z.is_zero())
}

fn base_point() -> impl Strategy<Value = GRat> {
    prop_oneof![Just(GRat::zero()), nonzero_grat()]
}

fn element_over(x: GRat) -> impl Strategy<Value = LogPointElement> {
    (nonzero_grat(), -3i64..=3).prop_map(move |(y, i)| LogPointElement::new(x.clone(), y, i).unwrap())
}

fn unit_section() -> impl Strategy<Value = MeromorphicSection> {
    (-3i64..=3, prop::collection::vec(-4i64..=4, 0..=3), 1i64..=4).prop_map(|(n, tail, c0)| {
        let f = tail.iter().enumerate().fold(LaurentPoly::constant(1, rat(c0)), |acc, (k, &c)| {
            acc.add(&LaurentPoly::monomial(vec![k as i32 + 1], rat(c)))
        });
        MeromorphicSection::new(n, f).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normalize_is_idempotent_and_multiplication_well_defined(
        (p, q, j) in base_point().prop_flat_map(|x| (element_over(x.clone()), element_over(x), -3i64..=3))
    ) {
        let n = p.normalize();
        prop_assert_eq!(n.normalize(), n.clone());
        prop_assert!(p.equivalent(&n));
        // another representative of the same class
        let shifted = if p.x.is_zero() {
            p.clone()
        } else {
            let mut y = p.y.clone();
            for _ in 0..j.unsigned_abs() {
                y = if j > 0 { y / p.x.clone() } else { y * p.x.clone() };
            }
            LogPointElement::new(p.x.clone(), y, p.i + j).unwrap()
        };
        prop_assert!(shifted.equivalent(&p));
        prop_assert!(p.multiply(&q).unwrap().equivalent(&shifted.multiply(&q).unwrap()));
        prop_assert!(p.multiply(&p.inverse()).unwrap().equivalent(&LogPointElement::identity(p.x.clone())));
    }

    #[test]
    fn scaling_action_is_an_action_and_a_homomorphism(
        (p, q, a, b) in base_point().prop_flat_map(|x| (element_over(x.clone()), element_over(x), nonzero_grat(), nonzero_grat()))
    ) {
        let g = ScalingArrow::new(a, p.x.clone()).unwrap();
        let h = ScalingArrow::new(b, g.target()).unwrap();
        let hg = h.after(&g).unwrap();
        prop_assert_eq!(act(&h, &act(&g, &p).unwrap()).unwrap(), act(&hg, &p).unwrap());
        let lhs = act(&g, &p.multiply(&q).unwrap()).unwrap();
        let rhs = act(&g, &p).unwrap().multiply(&act(&g, &q).unwrap()).unwrap();
        prop_assert!(lhs.equivalent(&rhs));
        let id = ScalingArrow::new(GRat::one(), p.x.clone()).unwrap();
        prop_assert!(act(&id, &p).unwrap().equivalent(&p));
    }

    #[test]
    fn dlog_is_additive_and_evaluation_multiplicative(s in unit_section(), t in unit_section(), x in grat_strategy(), order in 1usize..10) {
        let st = s.multiply(&t);
        prop_assert_eq!(st.dlog(order), s.dlog(order).add(&t.dlog(order)));
        if let (Some(a), Some(b), Some(c)) = (s.at(&x), t.at(&x), st.at(&x)) {
            prop_assert!(a.multiply(&b).unwrap().equivalent(&c));
        }
    }

    #[test]
    fn periods_change_sign_with_orientation(
        omega in form_strategy(Chart::new(["x", "y", "z"]), 2, 0),
        center in prop::array::uniform3(-1.0f64..1.0),
        radius in 0.3f64..2.0,
        torus in any::<bool>(),
    ) {
        let form = NumericForm::from_symbolic(&omega);
        let cycle = if torus {
            Cycle2 { shape: CycleShape::FlatTorus { axes: [0, 2] }, base: center.to_vec(), reversed: false }
        } else {
            Cycle2 { shape: CycleShape::Sphere { center, radius, axes: [0, 1, 2] }, base: vec![0.0; 3], reversed: false }
        };
        let forward = period(&form, &cycle, 8).unwrap();
        let backward = period(&form, &cycle.clone().reversed(), 8).unwrap();
        let scale = 1.0 + forward.re.abs();
        prop_assert!((forward.re + backward.re).abs() < 1e-9 * scale, "{} vs {}", forward.re, backward.re);
        prop_assert!((forward.im + backward.im).abs() < 1e-9 * scale);
    }

    #[test]
    fn extension_class_differs_by_the_section_coboundary(p in poly_strategy(4, 0), q in poly_strategy(4, 0)) {
        let g = CoordGroupSpec::plane_action();
        let built = build_central_extension(&ExtensionSpec::parse(g.clone(), "c", "a'*b").unwrap()).unwrap();
        // φ = a p + b q vanishes at the identity
        let phi = LaurentPoly::var(4, 0).mul(&p).add(&LaurentPoly::var(4, 1).mul(&q));
        let section = vec![LaurentPoly::var(4, 0), LaurentPoly::var(4, 1), phi];
        let class = extension_class(&built, &section).unwrap();
        prop_assert!(class.certified);
        prop_assert!(check_cocycle(&g, &class.cocycles[0]).unwrap().holds);
    }
}

#[test]
fn zero_section_recovers_the_building_cocycle() {
    let g = CoordGroupSpec::plane_action();
    let built = build_central_extension(&ExtensionSpec::parse(g, "c", "a'*b").unwrap()).unwrap();
    let section = vec![LaurentPoly::var(4, 0), LaurentPoly::var(4, 1), LaurentPoly::zero(4)];
    let class = extension_class(&built, &section).unwrap();
    assert!(class.certified);
    assert_eq!(class.cocycles[0].to_string(), "a'*b");
    assert!(class.certificate[0].expr.is_zero());
}
