mod common;

use common::*;
use marbles::algebra::{c64, mat_vec_counts};
use marbles::deutsch::{oracle_matrix, BinaryFunction};
use marbles::gates::{apply, ket_of_bits, parallel, sequential, BitstringKet, Gate};
use marbles::measurement::{basis_distribution, is_product_state, spectral_decompose, Observable};
use marbles::*;
use proptest::prelude::*;

fn cfg() -> ProptestConfig {
    ProptestConfig::with_cases(256)
}

proptest! {
    #![proptest_config(cfg())]

    #[test]
    fn mat_mul_is_associative(
        (a, b, c) in (1usize..5, 1usize..5, 1usize..5, 1usize..5)
            .prop_flat_map(|(p, q, r, s)| (matrix(p, q), matrix(q, r), matrix(r, s)))
    ) {
        let left = mat_mul(&mat_mul(&a, &b).unwrap(), &c).unwrap();
        let right = mat_mul(&a, &mat_mul(&b, &c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right).unwrap() <= 1e-9);
    }

    #[test]
    fn mat_mul_matches_naive(
        (a, b) in (1usize..6, 1usize..6, 1usize..6)
            .prop_flat_map(|(p, q, r)| (matrix(p, q), matrix(q, r)))
    ) {
        let fast = mat_mul(&a, &b).unwrap();
        prop_assert!(fast.max_abs_diff(&naive_mul(&a, &b)).unwrap() <= 1e-12);
    }

    #[test]
    fn mat_vec_composes(
        (a, b, x) in (1usize..5, 1usize..5, 1usize..5)
            .prop_flat_map(|(p, q, r)| (matrix(p, q), matrix(q, r), vector(r)))
    ) {
        let ab = mat_mul(&a, &b).unwrap();
        let lhs = mat_vec(&ab, &x).unwrap();
        let rhs = mat_vec(&a, &mat_vec(&b, &x).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-9);
    }

    #[test]
    fn kron_mixed_product(
        (a, b, c, d) in (1usize..5, 1usize..5, 1usize..5, 1usize..5, 1usize..5, 1usize..5)
            .prop_flat_map(|(p, q, r, s, t, u)| (matrix(p, q), matrix(r, s), matrix(q, t), matrix(s, u)))
    ) {
        let lhs = mat_mul(&kron(&a, &b), &kron(&c, &d)).unwrap();
        let rhs = kron(&mat_mul(&a, &c).unwrap(), &mat_mul(&b, &d).unwrap());
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-9);
    }

    #[test]
    fn kron_index_formula(
        (a, b) in (1usize..4, 1usize..4, 1usize..4, 1usize..4)
            .prop_flat_map(|(p, q, r, s)| (matrix(p, q), matrix(r, s)))
    ) {
        let k = kron(&a, &b);
        let (br, bc) = b.shape();
        for j in 0..k.rows() {
            for l in 0..k.cols() {
                prop_assert_eq!(k[(j, l)], a[(j / br, l / bc)] * b[(j % br, l % bc)]);
            }
        }
    }

    #[test]
    fn adjoint_reverses_products(
        (a, b) in (1usize..5, 1usize..5, 1usize..5)
            .prop_flat_map(|(p, q, r)| (matrix(p, q), matrix(q, r)))
    ) {
        let lhs = adjoint(&mat_mul(&a, &b).unwrap());
        let rhs = mat_mul(&adjoint(&b), &adjoint(&a)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-9);
        prop_assert_eq!(adjoint(&adjoint(&a)), a);
    }

    #[test]
    fn unitary_modulus_squares_are_doubly_stochastic(u in (1usize..7).prop_flat_map(unitary)) {
        prop_assert!(validate(&u, MatrixClass::Quantum, 1e-9).unwrap().passed());
        let sq = modulus_squared(&u);
        prop_assert!(validate(&sq, MatrixClass::Stochastic, 1e-9).unwrap().passed());
    }

    #[test]
    fn normalize_ignores_positive_scale(
        v in prop::collection::vec(0.01f64..10.0, 1..8),
        k in 0.1f64..100.0,
    ) {
        let v = StateVector::from_real(&v).unwrap();
        let a = normalize(&v).unwrap();
        let b = normalize(&v.scale(c64(k, 0.))).unwrap();
        prop_assert!(a.max_abs_diff(&b).unwrap() <= 1e-12);
        prop_assert!((a.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn deterministic_step_conserves_marbles(
        (targets, counts) in (1usize..=6).prop_flat_map(|n| (
            prop::collection::vec(0..n, n),
            prop::collection::vec(0u64..1_000_000, n),
        ))
    ) {
        let sys = RegimeSystem::strict(Regime::Deterministic, function_matrix(&targets)).unwrap();
        let x = MarbleState::new(counts).unwrap();
        let total = x.total();
        let y = evolve(&sys, &State::from(x), 3).unwrap();
        match y {
            State::Marbles(m) => prop_assert_eq!(m.total(), total),
            _ => prop_assert!(false, "state kind changed"),
        }
    }

    #[test]
    fn stochastic_step_conserves_probability(
        (m, p) in (1usize..=6).prop_flat_map(|n| (
            doubly_stochastic(n),
            prop::collection::vec(0.0f64..1.0, n).prop_filter("mass", |p| p.iter().sum::<f64>() > 1e-3),
        ))
    ) {
        let total: f64 = p.iter().sum();
        let p: Vec<f64> = p.iter().map(|x| x / total).collect();
        let sys = RegimeSystem::strict(Regime::Stochastic, m).unwrap();
        let x = State::from(ProbabilityState::new(p, 1e-9).unwrap());
        let y = step(&sys, &x).unwrap();
        prop_assert!((y.weights().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn quantum_step_preserves_norm_and_reverses(
        (u, v) in (1usize..=6).prop_flat_map(|n| (unitary(n), nonzero_vector(n)))
    ) {
        let sys = RegimeSystem::strict(Regime::Quantum, u).unwrap();
        let x = State::from(QuantumState::new(v).unwrap());
        let y = step(&sys, &x).unwrap();
        let y_vec = y.to_vector();
        prop_assert!((y_vec.norm() - 1.0).abs() <= 1e-9);
        let back = step(&sys.adjoint().unwrap(), &y).unwrap();
        prop_assert!(back.to_vector().max_abs_diff(&x.to_vector()).unwrap() <= 1e-9);
    }

    #[test]
    fn tensor_of_dynamics_acts_on_tensor_of_states(
        (u, w, a, b) in (1usize..4, 1usize..4)
            .prop_flat_map(|(n, m)| (unitary(n), unitary(m), nonzero_vector(n), nonzero_vector(m)))
    ) {
        let lhs = mat_vec(&kron(&u, &w), &a.tensor(&b)).unwrap();
        let rhs = mat_vec(&u, &a).unwrap().tensor(&mat_vec(&w, &b).unwrap());
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-9);
    }

    #[test]
    fn distribution_ignores_global_scalar(
        v in (1usize..9).prop_flat_map(nonzero_vector),
        c in complex().prop_filter("non-zero", |c| c.norm() > 1e-3),
    ) {
        let a = basis_distribution(&v).unwrap();
        let b = basis_distribution(&v.scale(c)).unwrap();
        prop_assert!((a.probabilities().iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        for (x, y) in a.probabilities().iter().zip(b.probabilities()) {
            prop_assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn spectral_decomposition_reconstructs(h in (1usize..=6).prop_flat_map(hermitian)) {
        let e = spectral_decompose(&Observable::new(h.clone(), 1e-9).unwrap());
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(e.reconstruct().max_abs_diff(&h).unwrap() <= 1e-7);
        let n = h.rows();
        for j in 0..n {
            let v = e.eigenvector(j);
            let av = mat_vec(&h, &v).unwrap();
            let lv = v.scale(c64(e.eigenvalues[j], 0.));
            let residual = av.max_abs_diff(&lv).unwrap();
            prop_assert!(residual <= 1e-8, "residual {}", residual);
            for k in j + 1..n {
                if (e.eigenvalues[j] - e.eigenvalues[k]).abs() > 1e-6 {
                    let w = e.eigenvector(k);
                    let dot: C64 = (0..n).map(|i| v[i].conj() * w[i]).sum();
                    prop_assert!(dot.norm() <= 1e-8);
                }
            }
        }
    }

    #[test]
    fn product_states_are_recognised(
        (a, b) in (1usize..5, 1usize..5).prop_flat_map(|(n, m)| (nonzero_vector(n), nonzero_vector(m)))
    ) {
        let ab = a.tensor(&b);
        match is_product_state(&ab, a.dim(), b.dim(), 1e-9).unwrap() {
            measurement::Separability::Product { left, right } => {
                let back = left.tensor(&right);
                // Equal up to a global complex scalar: find it from the largest entry.
                let unit = ab.normalize().unwrap();
                let (k, _) = unit.amplitudes().iter().enumerate()
                    .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm())).unwrap();
                let phase = unit[k] / back[k];
                prop_assert!(back.scale(phase).max_abs_diff(&unit).unwrap() <= 1e-9);
            }
            other => prop_assert!(false, "expected product, got {:?}", other),
        }
    }

    #[test]
    fn sequential_gates_apply_in_order(
        (a, b, v) in (1usize..4).prop_flat_map(|bits| (unitary(1 << bits), unitary(1 << bits), nonzero_vector(1 << bits)))
    ) {
        let ga = Gate::quantum("A", a).unwrap();
        let gb = Gate::quantum("B", b).unwrap();
        let lhs = apply(&sequential(&ga, &gb).unwrap(), &v).unwrap();
        let rhs = apply(&gb, &apply(&ga, &v).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-9);
    }

    #[test]
    fn parallel_gates_act_per_wire_group(
        (a, b, u, v) in (1usize..3, 1usize..3).prop_flat_map(|(p, q)| (
            unitary(1 << p), unitary(1 << q), nonzero_vector(1 << p), nonzero_vector(1 << q),
        ))
    ) {
        let ga = Gate::quantum("A", a).unwrap();
        let gb = Gate::quantum("B", b).unwrap();
        let lhs = apply(&parallel(&ga, &gb).unwrap(), &u.tensor(&v)).unwrap();
        let rhs = apply(&ga, &u).unwrap().tensor(&apply(&gb, &v).unwrap());
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-9);
    }

    #[test]
    fn interchange_law(
        (a, b, a2, b2) in (unitary(2), unitary(2), unitary(4), unitary(4))
    ) {
        let (a, b) = (Gate::quantum("A", a).unwrap(), Gate::quantum("B", b).unwrap());
        let (a2, b2) = (Gate::quantum("A'", a2).unwrap(), Gate::quantum("B'", b2).unwrap());
        let lhs = parallel(&sequential(&a, &b).unwrap(), &sequential(&a2, &b2).unwrap()).unwrap();
        let rhs = sequential(&parallel(&a, &a2).unwrap(), &parallel(&b, &b2).unwrap()).unwrap();
        prop_assert!(lhs.matrix().max_abs_diff(rhs.matrix()).unwrap() <= 1e-9);
    }

    #[test]
    fn kets_concatenate_as_tensors(s in "[01]{1,6}", t in "[01]{1,6}") {
        let joined = ket_of_bits(&BitstringKet::parse(&format!("{s}{t}")).unwrap());
        let a = ket_of_bits(&BitstringKet::parse(&s).unwrap());
        let b = ket_of_bits(&BitstringKet::parse(&t).unwrap());
        prop_assert_eq!(joined, a.tensor(&b));
    }
}

#[test]
fn self_parallel_dimension_grows_exponentially() {
    let bit = RegimeSystem::identity(Regime::Stochastic, 2);
    let mut sys = bit.clone();
    for m in 1..=6 {
        assert_eq!(sys.dim(), 1 << m);
        sys = compose_parallel(&sys, &bit).unwrap();
    }
}

#[test]
fn oracles_are_self_inverse_permutations() {
    for f in BinaryFunction::all() {
        let u = oracle_matrix(f);
        assert!(validate(u.matrix(), MatrixClass::Quantum, 1e-9)
            .unwrap()
            .passed());
        assert_eq!(
            mat_mul(u.matrix(), u.matrix()).unwrap(),
            DenseMatrix::identity(4)
        );
        assert!(validate(u.matrix(), MatrixClass::Deterministic, 0.0)
            .unwrap()
            .passed());
    }
}

#[test]
fn counts_step_agrees_with_float_step() {
    let m = marbles::experiments::fixtures::marble_matrix();
    let counts = [6, 2, 1, 5, 3, 10];
    let exact = mat_vec_counts(&m, &counts).unwrap();
    let float = mat_vec(
        &m,
        &StateVector::from_real(&counts.map(|c| c as f64)).unwrap(),
    )
    .unwrap();
    for (e, f) in exact.iter().zip(float.amplitudes()) {
        assert_eq!(*e as f64, f.re);
    }
}
