//! Cross-module invariants beyond the acceptance criteria.

use minzero::census::{enumerate_classes, CensusOptions, CondSet};
use minzero::families::SupportFamily;
use minzero::irred::{self, Generator, Relation};
use minzero::lp::{
    build_condition_v_lp, farkas_valid, point_satisfies, simplex_solve, Constraint, LpOutcome, Rel,
};
use minzero::matgen::gen_horn;
use minzero::ratlin::{kernel_basis, rank, rat_int, Rat, RatVec, SymmetricRationalMatrix};
use minzero::zeros::find_minimal_zeros;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn condition_v_certificates_verify_across_the_n5_census() {
    // Every family satisfying the antichain conditions at n = 5 gets its
    // LP outcome re-checked: optimal points satisfy all constraints
    // exactly, infeasibility certificates combine to a contradiction.
    let r = enumerate_classes(
        5,
        CondSet::I_II,
        &CensusOptions {
            collect_classes: true,
            ..CensusOptions::default()
        },
    )
    .unwrap();
    assert_eq!(r.count, 150);
    let mut optimal = 0;
    let mut infeasible = 0;
    for f in &r.classes {
        let (lp, _) = build_condition_v_lp(f).unwrap();
        match simplex_solve(&lp) {
            LpOutcome::Optimal { point, .. } => {
                assert!(point_satisfies(&lp, &point), "family {f}");
                optimal += 1;
            }
            LpOutcome::Infeasible { farkas } => {
                assert!(farkas_valid(&lp, &farkas), "family {f}");
                infeasible += 1;
            }
            LpOutcome::Unbounded { .. } => panic!("capped program cannot be unbounded"),
        }
    }
    assert_eq!(optimal + infeasible, 150);
    assert!(optimal > 0 && infeasible > 0);
}

#[test]
fn condition_v_value_shrinks_under_extra_constraints() {
    let f = SupportFamily::parse(5, "{1,2},{2,3},{3,4},{4,5},{1,5}").unwrap();
    let (lp, _) = build_condition_v_lp(&f).unwrap();
    let base = match simplex_solve(&lp) {
        LpOutcome::Optimal { value, .. } => value,
        o => panic!("{o:?}"),
    };
    let mut r = ChaCha8Rng::seed_from_u64(0xB0);
    for _ in 0..20 {
        let mut tightened = lp.clone();
        let mut coeffs = vec![Rat::zero(); lp.num_vars()];
        let a = r.random_range(0..10);
        let b = r.random_range(0..10);
        coeffs[a] = rat_int(-1);
        coeffs[b] -= rat_int(1);
        tightened.constraints.push(Constraint {
            coeffs,
            rel: Rel::Ge,
            rhs: rat_int(-r.random_range(1..=2)),
        });
        match simplex_solve(&tightened) {
            LpOutcome::Optimal { value, .. } => assert!(value <= base),
            LpOutcome::Infeasible { farkas } => assert!(farkas_valid(&tightened, &farkas)),
            LpOutcome::Unbounded { .. } => panic!("capped program cannot be unbounded"),
        }
    }
}

#[test]
fn psd_irreducibility_matches_rank_one_generator_sweep() {
    // irreducible wrt the PSD cone iff random rank-one generators all pass
    // and every vector of an orthogonal-complement basis of the zero span
    // fails when the rank is deficient.
    let mut r = ChaCha8Rng::seed_from_u64(0x9d);
    let cases: Vec<SymmetricRationalMatrix> = vec![
        gen_horn(),
        SymmetricRationalMatrix::from_rows(&[
            vec![rat_int(1), rat_int(-1)],
            vec![rat_int(-1), rat_int(1)],
        ])
        .unwrap(),
        SymmetricRationalMatrix::identity(3),
    ];
    for a in &cases {
        let mz = find_minimal_zeros(a).unwrap();
        let psd = irred::irreducible_wrt_psd(a, &mz);
        // 200 random nonzero generators must all witness irreducibility
        // when the span is full.
        if psd.irreducible {
            for _ in 0..200 {
                let w: RatVec = (0..a.n())
                    .map(|_| rat_int(r.random_range(-9..=9)))
                    .collect();
                if w.iter().all(|x| x.is_zero()) {
                    continue;
                }
                assert!(
                    irred::irreducible_wrt_generator(a, &mz, &Generator::RankOne(w)).unwrap()
                );
            }
        } else {
            // Orthogonal complement of the zero span via the kernel of
            // U^T U; every basis vector must yield a reducible verdict.
            let n = a.n();
            let zeros: Vec<RatVec> = mz.zeros().iter().map(|z| z.vector.clone()).collect();
            let gram = SymmetricRationalMatrix::from_fn(n, |i, j| {
                zeros.iter().map(|u| &u[i] * &u[j]).sum()
            });
            let complement = kernel_basis(&gram);
            assert_eq!(complement.len(), n - psd.rank);
            assert!(!complement.is_empty());
            for w in complement {
                assert!(
                    !irred::irreducible_wrt_generator(a, &mz, &Generator::RankOne(w)).unwrap()
                );
            }
            assert!(rank(&zeros).unwrap() < n);
        }
    }
}

#[test]
fn unit_diagonal_irreducible_matrices_satisfy_alpha_relations() {
    // End-to-end consistency between the zero search, the irreducibility
    // verdicts, and the relation evaluator: for unit-diagonal matrices
    // declared irreducible wrt the nonnegative cone, relations (a), (e),
    // (g), (h) all hold.
    let h = gen_horn();
    let mz = find_minimal_zeros(&h).unwrap();
    assert!(irred::irreducible_wrt_nonnegative(&h, &mz).irreducible);
    let supports = mz.support_family();
    let (_, report) = irred::lin_rel_check(&h, &supports, 1e-9).unwrap();
    for c in &report.checks {
        if matches!(c.relation, Relation::A | Relation::E | Relation::G | Relation::H) {
            assert_eq!(c.passed, Some(true), "{:?} on {:?}", c.relation, c.indices);
        }
    }
    // Pair-support witnesses of unit-diagonal matrices carry two equal
    // positive entries.
    for z in mz.zeros() {
        if z.support.len() == 2 {
            let pos: Vec<&Rat> = z.vector.iter().filter(|x| x.is_positive()).collect();
            assert_eq!(pos.len(), 2);
            assert_eq!(pos[0], pos[1]);
        }
    }
}

#[test]
fn census_is_deterministic_across_worker_splits() {
    // The merge order is fixed, so results are identical however rayon
    // schedules the depth-2 subtrees. Run the same census twice from
    // differently-sized pools.
    let opts = CensusOptions {
        collect_classes: true,
        ..CensusOptions::default()
    };
    let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let a = pool1.install(|| enumerate_classes(5, CondSet::ALL, &opts).unwrap());
    let pool2 = rayon::ThreadPoolBuilder::new().num_threads(2).build().unwrap();
    let b = pool2.install(|| enumerate_classes(5, CondSet::ALL, &opts).unwrap());
    assert_eq!(a.count, b.count);
    assert_eq!(a.classes, b.classes);
}
