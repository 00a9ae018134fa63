#![allow(dead_code)]

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xplego::decoder::{Channel, Syndrome, XpDecoder};
use xplego::dense::{self, projector, xp_certificate, DenseOperator, DenseState, Mat2};
use xplego::lego::{self, Insertion, Lego};
use xplego::registry::lookup;
use xplego::{LegRole, XpGroup, XpOperator};

/// A random XP state lego on `n` qubits at precision `nn`, with its dense
/// shadow, certified by the exhaustive stabilizer solve. Returns `None` when
/// the sampled generators fix nothing or the codeword is not an XP state.
pub fn random_state(rng: &mut ChaCha8Rng, n: usize, nn: u32) -> Option<Lego> {
    let e0: Vec<u8> = (0..n).map(|_| rng.gen_range(0..2)).collect();
    let mut gens = Vec::new();
    for _ in 0..rng.gen_range(1..=n) {
        let z: Vec<i64> = (0..n).map(|_| rng.gen_range(0..nn as i64)).collect();
        if rng.gen_bool(0.75) {
            let x: Vec<i64> = (0..n).map(|_| rng.gen_range(0..2)).collect();
            // A² = XP(0 | 2z − 2x∘z | 2p + 2x·z); pick p so A² fixes |e0⟩.
            let xz: i64 = x.iter().zip(&z).map(|(a, b)| a * b).sum();
            let sq: i64 = (0..n).map(|i| (2 * z[i] - 2 * x[i] * z[i]) * e0[i] as i64).sum();
            let p = -xz - sq + if rng.gen_bool(0.5) { nn as i64 } else { 0 };
            gens.push(XpOperator::new(nn, &x, &z, p).ok()?);
        } else {
            // Phase chosen so that |e0⟩ lies in the diagonal generator's +1 space.
            let dot: i64 = z.iter().zip(&e0).map(|(&a, &b)| a * b as i64).sum();
            gens.push(XpOperator::new(nn, &vec![0; n], &z, -2 * dot).ok()?);
        }
    }
    let g = XpGroup::new(n, nn, gens).ok()?.canonical_form().ok()?;
    let table = g.codewords().ok()?;
    let mut s = DenseState::zero(n);
    for &(e, ph) in table.codewords.first()? {
        s.amps[e as usize] += dense::omega_pow(nn, ph as i64);
    }
    let cert = dense::xp_certificate(&s, nn).ok()??;
    Lego::new(cert).ok()?.with_dense(s).ok()
}

/// Keeps sampling until a state is found.
pub fn some_state(rng: &mut ChaCha8Rng, n: usize, nn: u32) -> Lego {
    loop {
        if let Some(l) = random_state(rng, n, nn) {
            return l;
        }
    }
}

/// Registry states with at most `max_n` legs at precision `nn`, as all-physical legos.
pub fn registry_states(max_n: usize, nn: u32) -> Vec<Lego> {
    xplego::registry::registry()
        .into_iter()
        .filter(|e| e.group.n() <= max_n && e.group.precision() == nn)
        .filter_map(|e| {
            let l = e.lego().ok()?;
            l.dense.as_ref()?;
            Some(Lego { legs: vec![xplego::LegRole::Physical; l.n()], ..l })
        })
        .collect()
}

/// Diagonal of `T̄ = T^{⊗6} ⊗ K` on 8 qubits, `K = diag(1, a, a, 1)` on qubits 6, 7, `a = e^{iπ/4}`.
pub fn t_bar_diagonal() -> Vec<C64> {
    let a = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    (0..256u64)
        .map(|e| {
            let b = dense::bits(e, 8);
            let w = b[..6].iter().filter(|&&v| v == 1).count() as i32 + (b[6] ^ b[7]) as i32;
            a.powi(w)
        })
        .collect()
}

/// Codewords of a code as dense states, in the order of the codeword table.
pub fn codeword_states(g: &XpGroup) -> Vec<DenseState> {
    let table = g.codewords().unwrap();
    table
        .codewords
        .iter()
        .map(|cw| {
            let mut s = DenseState::zero(g.n());
            for &(e, ph) in cw {
                s.amps[e as usize] += dense::omega_pow(g.precision(), ph as i64);
            }
            s.normalized()
        })
        .collect()
}

/// 4x4 matrices for the propagation identity `K X_j K† = X_j (I⊗I + i Z⊗Z)/√2`,
/// returned as (left side, right side) for `j ∈ {0, 1}`.
pub fn k_gate_propagation(j: usize) -> (Vec<Vec<C64>>, Vec<Vec<C64>>) {
    use C64 as C;
    let a = C::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let k = [C::new(1.0, 0.0), a, a, C::new(1.0, 0.0)];
    let flip = if j == 0 { 2 } else { 1 };
    let zz = |e: usize| if ((e >> 1) ^ e) & 1 == 1 { -1.0 } else { 1.0 };
    let mut lhs = vec![vec![C::new(0.0, 0.0); 4]; 4];
    let mut rhs = vec![vec![C::new(0.0, 0.0); 4]; 4];
    for e in 0..4 {
        // K X_j K† |e⟩ = conj(k_e) k_{e⊕flip} |e⊕flip⟩.
        lhs[e ^ flip][e] = k[e].conj() * k[e ^ flip];
        rhs[e ^ flip][e] = (C::new(1.0, 0.0) + C::new(0.0, zz(e))) / 2f64.sqrt();
    }
    (lhs, rhs)
}

#[derive(Default, Debug)]
pub struct Tally {
    pub certified: usize,
    pub non_xp: usize,
    pub vanished: usize,
    pub failures: Vec<String>,
    pub per_precision: [usize; 3],
}

/// Random single- and two-lego traces. Whenever the dense contraction is a
/// certified XP state, the projector of the matched group must equal the
/// projector onto the contracted state.
pub fn run_suite(target: usize, seed: u64, insertion: bool) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::default();
    let mut attempts = 0;
    while t.certified < target && attempts < 50 * target {
        attempts += 1;
        let pi = rng.gen_range(0..3);
        let nn = [2u32, 4, 8][pi];
        let atoms = registry_states(6, nn);
        let l = if !atoms.is_empty() && rng.gen_bool(0.25) {
            let a = atoms[rng.gen_range(0..atoms.len())].clone();
            if a.n() < 6 && rng.gen_bool(0.5) {
                let nb = rng.gen_range(1..=(6 - a.n()).min(3));
                let b = some_state(&mut rng, nb, nn);
                lego::tensor_product(&a, &b).unwrap()
            } else {
                a
            }
        } else if rng.gen_bool(0.5) {
            let n = rng.gen_range(2..=6);
            some_state(&mut rng, n, nn)
        } else {
            let na = rng.gen_range(1..=3);
            let nb = rng.gen_range(1..=(6 - na).min(3));
            let a = some_state(&mut rng, na, nn);
            let b = some_state(&mut rng, nb, nn);
            lego::tensor_product(&a, &b).unwrap()
        };
        let n = l.n();
        if n < 2 {
            continue;
        }
        let j = rng.gen_range(0..n);
        let k = (j + rng.gen_range(1..n)) % n;
        let state = l.dense.clone().unwrap();
        let (traced, contracted) = if insertion {
            let x = dense::pauli_mat(1);
            (lego::trace_with_insertion(&l, j, k, &Insertion::X).unwrap(), dense::self_contract(&state, j, k, Some(&x)).unwrap())
        } else {
            (lego::self_trace(&l, j, k).unwrap(), dense::self_contract(&state, j, k, None).unwrap())
        };
        if contracted.norm() < 1e-9 {
            t.vanished += 1;
            continue;
        }
        if n == 2 {
            // Scalar result: nothing to compare beyond a non-empty trace.
            continue;
        }
        match xp_certificate(&contracted, nn).unwrap() {
            None => {
                t.non_xp += 1;
                if nn == 2 {
                    t.failures.push(format!("N=2 contraction not certified XP (n={n}, legs {j},{k})"));
                }
            }
            Some(_) => {
                t.certified += 1;
                t.per_precision[pi] += 1;
                let want = DenseOperator::outer(&contracted.normalized());
                match projector(&traced.group) {
                    Ok(p) if p.distance(&want) <= 1e-9 => {}
                    Ok(p) => t.failures.push(format!(
                        "N={nn} n={n} legs {j},{k}: projector distance {:.2e}, matched group\n{}",
                        p.distance(&want),
                        traced.group.render()
                    )),
                    Err(e) => t.failures.push(format!("N={nn} n={n} legs {j},{k}: {e}")),
                }
            }
        }
    }
    t
}

pub fn random_unitary(rng: &mut ChaCha8Rng) -> Mat2 {
    let (t, u, v, w) = (rng.gen::<f64>() * 6.3, rng.gen::<f64>() * 6.3, rng.gen::<f64>() * 6.3, rng.gen::<f64>() * 1.6);
    let a = C64::from_polar(w.cos(), u);
    let b = C64::from_polar(w.sin(), v);
    let g = C64::from_polar(1.0, t);
    [[a * g, -b.conj() * g], [b * g, a.conj() * g]]
}

/// A non-unital channel with coherent off-diagonal process coefficients:
/// damping followed by a random unitary, mixed with a second random unitary.
pub fn random_channel(rng: &mut ChaCha8Rng) -> Channel {
    let q: f64 = rng.gen_range(0.6..0.95);
    let damp = Channel::amplitude_damping(rng.gen_range(0.05..0.3)).unwrap();
    let u1 = random_unitary(rng);
    let u2 = random_unitary(rng);
    let s = |m: Mat2, f: f64| m.map(|r| r.map(|v| v * f));
    let mut kraus: Vec<Mat2> = damp.kraus.iter().map(|d| s(dense::mat2_mul(&u1, d), q.sqrt())).collect();
    kraus.push(s(u2, (1.0 - q).sqrt()));
    Channel::new(kraus).unwrap()
}

pub fn apply_product(v: &mut [C64], n: usize, factors: &[Mat2]) {
    for (q, u) in factors.iter().enumerate() {
        dense::apply_single_vec(v, n, q, u);
    }
}

/// `Σ_i |⟨φ|K_i|ψ⟩|²` over all n-fold products of Kraus operators.
pub fn kraus_overlap_sum(kraus: &[Mat2], n: usize, q: usize, psi: &[C64], phi: &[C64]) -> f64 {
    if q == n {
        let ov: C64 = phi.iter().zip(psi).map(|(a, b)| a.conj() * b).sum();
        return ov.norm_sqr();
    }
    kraus
        .iter()
        .map(|k| {
            let mut t = psi.to_vec();
            dense::apply_single_vec(&mut t, n, q, k);
            kraus_overlap_sum(kraus, n, q + 1, &t, phi)
        })
        .sum()
}

/// `Σ_i ‖Π_s K_i ψ‖²` over all n-fold Kraus products.
pub fn kraus_sector_weight(kraus: &[Mat2], sector: &DenseOperator, n: usize, q: usize, psi: &[C64]) -> f64 {
    if q == n {
        return sector.apply(&DenseState { n, amps: psi.to_vec() }).norm().powi(2);
    }
    kraus
        .iter()
        .map(|k| {
            let mut t = psi.to_vec();
            dense::apply_single_vec(&mut t, n, q, k);
            kraus_sector_weight(kraus, sector, n, q + 1, &t)
        })
        .sum()
}

/// Six logical states forming a 2-design on a 2-dimensional code space.
pub fn design_states(basis: &[DenseState]) -> Vec<Vec<C64>> {
    let (b0, b1) = (&basis[0].amps, &basis[1].amps);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let combos = [(C64::new(1.0, 0.0), C64::new(0.0, 0.0)), (C64::new(0.0, 0.0), C64::new(1.0, 0.0)), (C64::new(r, 0.0), C64::new(r, 0.0)), (C64::new(r, 0.0), C64::new(-r, 0.0)), (C64::new(r, 0.0), C64::new(0.0, r)), (C64::new(r, 0.0), C64::new(0.0, -r))];
    combos.iter().map(|&(a, b)| b0.iter().zip(b1).map(|(x, y)| a * x + b * y).collect()).collect()
}

pub fn all_syndromes(dec: &XpDecoder) -> Vec<Syndrome> {
    let (rz, sx) = (dec.r_z.len(), dec.s_x.len());
    (0..1u32 << (rz + sx))
        .map(|m| Syndrome {
            s_z: (0..rz).map(|j| ((m >> j) & 1) as u8).collect(),
            s_x: (0..sx).map(|j| ((m >> (rz + j)) & 1) as u8).collect(),
        })
        .collect()
}

/// The 5-qubit code obtained from the first lego state by opening leg 1.
pub fn five_qubit_code() -> XpGroup {
    let l = lookup("state-v1").unwrap().lego().unwrap();
    lego::redesignate(&l, 1, LegRole::Physical).unwrap().code_group().unwrap()
}

/// `Ẽ Π Ẽ†` for the identity-class representative of a syndrome.
pub fn sector_projector(dec: &XpDecoder, s: &Syndrome) -> DenseOperator {
    let e = dec.coset_operator(s, 0).unwrap();
    let mut p = dec.projector.clone();
    for (q, u) in e.iter().enumerate() {
        p.left_single(q, u);
        p.right_single(q, &dense::mat2_adjoint(u));
    }
    p
}

/// `(‖T̄ Π T̄† − Π‖, λ₁/λ₀)` on the [[8,1,2]] code, with `|0̄⟩` the +1
/// eigenstate of logical Z = ZZ on the repetition pair, qubits 6 and 7.
pub fn t_bar_on_812() -> (f64, C64) {
    let g = lookup("code-812").unwrap().group.canonical_form().unwrap();
    let p = projector(&g).unwrap();
    let t = t_bar_diagonal();
    let d = p.dim();
    let mut dist = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            dist += (t[i] * p.get(i, j) * t[j].conj() - p.get(i, j)).norm_sqr();
        }
    }
    let zz = |c: &DenseState| -> f64 { c.amps.iter().enumerate().map(|(e, a)| if (e ^ (e >> 1)) & 1 == 1 { -a.norm_sqr() } else { a.norm_sqr() }).sum() };
    let mut cw = codeword_states(&g);
    cw.sort_by(|a, b| zz(b).total_cmp(&zz(a)));
    assert!((zz(&cw[0]) - 1.0).abs() < 1e-9 && (zz(&cw[1]) + 1.0).abs() < 1e-9, "ZZ is not the logical Z");
    let lambda: Vec<C64> = cw.iter().map(|c| c.amps.iter().zip(&t).map(|(a, b)| a.conj() * a * b).sum()).collect();
    assert!(lambda.iter().all(|l| (l.norm() - 1.0).abs() < 1e-9), "codewords are not eigenvectors");
    (dist.sqrt(), lambda[1] / lambda[0])
}
