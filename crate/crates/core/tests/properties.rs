use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::Rng;

use indexcode::codec::{
    construct_rate_half, construct_rate_third, decode_all, encode, side_information, verify,
    ScalarLinearCode,
};
use indexcode::feasibility::{analyze, RateThirdVerdict};
use indexcode::linalg::{random_vector, seeded_rng, FieldPrime, VectorGF};
use indexcode::oracle::exists_code;
use indexcode::problem::{
    conflicts, random_problem, restrict_problem, Completeness, IndexCodingProblem, MessageId,
    MessageSet, ReceiverId,
};
use indexcode::structure::{find_acyclic_quadruple, StructureReport};

fn problems(max_n: usize) -> impl Strategy<Value = IndexCodingProblem> {
    (1..=max_n, 0.0..=1.0f64, any::<bool>(), any::<u64>())
        .prop_map(|(n, density, single, seed)| random_problem(n, density, single, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn structure_invariants(p in problems(8)) {
        let r = StructureReport::build(&p);
        let mut seen = BTreeSet::new();
        for s in &r.alignment_sets {
            for m in &s.members {
                prop_assert!(seen.insert(*m), "alignment sets overlap at {m}");
            }
        }
        prop_assert_eq!(seen, p.all_messages());
        for t in &r.type2_sets {
            let holders = r.alignment_sets.iter().filter(|s| t.messages.is_subset(&s.members)).count();
            prop_assert_eq!(holders, 1);
        }
        for s in &r.alignment_sets {
            prop_assert_eq!(r.classification_of(&s.members), Some(s.classification));
        }
    }

    #[test]
    fn verdicts_are_monotone_and_dominated(p in problems(8)) {
        let r = analyze(&p);
        if r.rate_one.feasible {
            prop_assert!(r.rate_half.feasible);
        }
        if r.rate_half.feasible {
            prop_assert!(!r.rate_third.is_infeasible());
        }
        if find_acyclic_quadruple(&p).is_some() {
            let dirty_verdict = matches!(r.rate_third, RateThirdVerdict::InfeasibleDirtyType2 { .. });
            prop_assert!(dirty_verdict);
        }
        if r.rate_third.is_infeasible() {
            prop_assert!(r.structure.type2_sets.iter().any(|t| !t.is_clean()));
        }
    }

    #[test]
    fn restriction_commutes_with_interference(p in problems(7), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let keep: MessageSet = p.messages().filter(|_| rng.gen_bool(0.6)).collect();
        prop_assume!(!keep.is_empty());
        let r = restrict_problem(&p, &keep).unwrap();
        let rp = r.problem();
        for (idx, &parent) in r.kept_receivers().iter().enumerate() {
            let j = ReceiverId::from_index(idx);
            for &k in rp.receivers()[idx].demands() {
                let got = r.to_original_set(&rp.interfering_set(j, k).unwrap());
                let want: MessageSet = p
                    .interfering_set(parent, r.to_original(k))
                    .unwrap()
                    .intersection(&keep)
                    .copied()
                    .collect();
                prop_assert_eq!(got, want);
            }
        }
        // Conflicts of the restriction stay inside the kept messages.
        for c in conflicts(rp) {
            let (a, b) = (r.to_original(c.a()), r.to_original(c.b()));
            prop_assert!(keep.contains(&a) && keep.contains(&b));
        }
    }

    #[test]
    fn nested_restriction_equals_direct(p in problems(7), seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let outer: MessageSet = p.messages().filter(|_| rng.gen_bool(0.7)).collect();
        prop_assume!(!outer.is_empty());
        let inner: MessageSet = outer.iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
        prop_assume!(!inner.is_empty());
        let first = restrict_problem(&p, &outer).unwrap();
        let inner_local: MessageSet = inner.iter().map(|&m| first.to_restricted(m).unwrap()).collect();
        let twice = restrict_problem(first.problem(), &inner_local).unwrap();
        let direct = restrict_problem(&p, &inner).unwrap();
        prop_assert_eq!(twice.problem().receivers(), direct.problem().receivers());
        prop_assert_eq!(twice.problem().n(), direct.problem().n());
    }

    #[test]
    fn problem_json_round_trips(p in problems(8)) {
        let back = IndexCodingProblem::parse(&p.to_json(), Completeness::AllowUndemanded).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn constructed_codes_decode(p in problems(7), seed in any::<u64>()) {
        let f = FieldPrime::new(1_000_003).unwrap();
        let mut rng = seeded_rng(seed);
        let codes: Vec<ScalarLinearCode> = [
            construct_rate_half(&p, f, &mut rng, 8).ok(),
            construct_rate_third(&p, f, &mut rng, 8).ok(),
        ]
        .into_iter()
        .flatten()
        .map(|c| c.code)
        .collect();
        for c in codes {
            prop_assert!(verify(&p, &c).unwrap().ok);
            let payload: Vec<u64> = (0..p.n()).map(|_| rng.gen_range(0..f.p())).collect();
            let word = encode(&p, &c, &payload).unwrap();
            let out = decode_all(&p, &c, &word, &side_information(&p, &payload)).unwrap();
            for d in &out {
                for (k, s) in d {
                    prop_assert_eq!(*s, payload[k.index()]);
                }
            }
        }
    }

    /// A failing code always hides some demanded symbol: two payloads that
    /// agree on a receiver's side information and give the same codeword
    /// differ in that receiver's demand.
    #[test]
    fn violations_are_real_ambiguities(p in problems(6), seed in any::<u64>(), length in 1usize..=3) {
        let f = FieldPrime::new(3).unwrap();
        let mut rng = seeded_rng(seed);
        let vectors: Vec<VectorGF> = (0..p.n())
            .map(|_| loop {
                let v = random_vector(length, f, &mut rng);
                if !v.is_zero() {
                    break v;
                }
            })
            .collect();
        let code = ScalarLinearCode::new(f, vectors).unwrap();
        let v = verify(&p, &code).unwrap();
        prop_assume!(!v.ok);
        let viol = v.violations[0];
        let interf: Vec<MessageId> = p.interfering_set(viol.receiver, viol.message).unwrap().into_iter().collect();
        // Search coefficients c with V_k = Σ c_i V_i.
        let target = code.vector(viol.message);
        let combos = 3u64.pow(interf.len() as u32);
        let coeffs = (0..combos)
            .map(|mut x| {
                interf
                    .iter()
                    .map(|_| {
                        let d = x % 3;
                        x /= 3;
                        d
                    })
                    .collect::<Vec<u64>>()
            })
            .find(|c| {
                let mut sum = VectorGF::zero(length);
                for (i, m) in interf.iter().enumerate() {
                    sum = sum.add(&code.vector(*m).scale(c[i], f), f);
                }
                &sum == target
            });
        prop_assert!(coeffs.is_some(), "violation without a linear dependency");
        let coeffs = coeffs.unwrap();
        let mut other = vec![0u64; p.n()];
        other[viol.message.index()] = 1;
        for (i, m) in interf.iter().enumerate() {
            other[m.index()] = f.neg(coeffs[i]);
        }
        let zero = vec![0u64; p.n()];
        prop_assert_eq!(encode(&p, &code, &other).unwrap(), encode(&p, &code, &zero).unwrap());
        let side = p.receiver(viol.receiver).unwrap().side_info();
        prop_assert!(side.iter().all(|m| other[m.index()] == 0));
    }

    #[test]
    fn verdicts_agree_with_oracle(p in problems(5)) {
        let r = analyze(&p);
        if r.rate_third.is_infeasible() {
            for q in [2, 3] {
                prop_assert!(!exists_code(&p, q, 3).unwrap().exists);
            }
        }
        if r.rate_half.feasible {
            // At most five alignment sets, and GF(5)^2 has six directions.
            prop_assert!(exists_code(&p, 5, 2).unwrap().exists);
        } else {
            prop_assert!(!exists_code(&p, 5, 2).unwrap().exists);
        }
        if let Some(w) = exists_code(&p, 2, 3).unwrap().witness {
            let v = verify(&p, &w).unwrap();
            prop_assert!(v.type2_rank_check_passes());
        }
    }
}
