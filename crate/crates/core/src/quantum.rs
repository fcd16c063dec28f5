//! Dense state-vector simulation used to check the graph rewrite rules
//! against real quantum operations. Qubit `i` is bit `i` of the basis index
//! and carries the `i`-th smallest vertex label.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Basis, LabeledGraph, Vertex};

pub const MAX_QUBITS: usize = 14;
/// Fidelity threshold for "equal up to global phase".
pub const FIDELITY_TOLERANCE: f64 = 1e-9;
/// Branches with smaller probability are rejected.
pub const MIN_PROBABILITY: f64 = 1e-12;
/// Largest correction search (`6^k` coset assignments).
pub const MAX_AFFECTED: usize = 6;

type Mat2 = [[Complex64; 2]; 2];

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

const I2: Mat2 = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
const PX: Mat2 = [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
const PY: Mat2 = [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]];
const PZ: Mat2 = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]];

fn mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn dagger(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

fn pauli(basis: Basis) -> Mat2 {
    match basis {
        Basis::X => PX,
        Basis::Y => PY,
        Basis::Z => PZ,
    }
}

/// `e^{iθ}` times the matrix, with the phase chosen so that the first
/// non-negligible entry is real and positive.
fn phase_normalized(m: &Mat2) -> Mat2 {
    let first = m.iter().flatten().find(|z| z.norm() > 1e-9).copied().unwrap_or(c(1.0, 0.0));
    let ph = first.conj() / first.norm();
    [[m[0][0] * ph, m[0][1] * ph], [m[1][0] * ph, m[1][1] * ph]]
}

fn key(m: &Mat2) -> [i64; 8] {
    let m = phase_normalized(m);
    let r = |x: f64| (x * 1e6).round() as i64;
    [
        r(m[0][0].re), r(m[0][0].im), r(m[0][1].re), r(m[0][1].im),
        r(m[1][0].re), r(m[1][0].im), r(m[1][1].re), r(m[1][1].im),
    ]
}

/// Single-qubit Clifford, up to global phase.
#[derive(Debug, Clone, PartialEq)]
pub struct Clifford {
    /// Word in `H` and `S`, applied left to right (`"I"` for identity).
    pub name: String,
    pub matrix: Mat2,
}

/// Which Pauli (up to sign) `m` is, if any.
fn pauli_axis(m: &Mat2) -> Option<Basis> {
    Basis::ALL.into_iter().find(|&b| key(m) == key(&pauli(b)))
}

impl Clifford {
    /// Axis of `C† σ C` for `σ` in X, Y, Z order.
    fn conjugated_axes(&self) -> [Basis; 3] {
        Basis::ALL.map(|b| {
            let m = mul(&mul(&dagger(&self.matrix), &pauli(b)), &self.matrix);
            pauli_axis(&m).expect("Cliffords map Paulis to Paulis")
        })
    }
}

/// The 24 single-qubit Cliffords, found by breadth-first products of H and S.
pub fn single_qubit_cliffords() -> &'static [Clifford] {
    static CACHE: OnceLock<Vec<Clifford>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        let h: Mat2 = [[c(s2, 0.0), c(s2, 0.0)], [c(s2, 0.0), c(-s2, 0.0)]];
        let s: Mat2 = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]];
        let mut out = vec![Clifford { name: "I".into(), matrix: I2 }];
        let mut seen = vec![key(&I2)];
        let mut head = 0;
        while head < out.len() {
            for (g, gname) in [(&h, "H"), (&s, "S")] {
                let m = phase_normalized(&mul(g, &out[head].matrix));
                let k = key(&m);
                if seen.contains(&k) {
                    continue;
                }
                seen.push(k);
                let name = if out[head].name == "I" { gname.to_string() } else { format!("{}{gname}", out[head].name) };
                out.push(Clifford { name, matrix: m });
            }
            head += 1;
        }
        out
    })
}

/// One Clifford per coset of the Pauli group (six of them), identity first.
fn coset_representatives() -> &'static [(usize, [Basis; 3])] {
    static CACHE: OnceLock<Vec<(usize, [Basis; 3])>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut reps: Vec<(usize, [Basis; 3])> = Vec::new();
        for (i, cl) in single_qubit_cliffords().iter().enumerate() {
            let axes = cl.conjugated_axes();
            if !reps.iter().any(|r| r.1 == axes) {
                reps.push((i, axes));
            }
        }
        reps
    })
}

/// Amplitudes over `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    labels: Vec<Vertex>,
    amps: Vec<Complex64>,
}

impl QuantumState {
    /// `|+⟩` on every labeled qubit.
    pub fn plus(labels: &[Vertex]) -> Result<Self> {
        if labels.len() > MAX_QUBITS {
            return Err(Error::SizeBound { size: labels.len(), bound: MAX_QUBITS });
        }
        let dim = 1usize << labels.len();
        let a = (dim as f64).sqrt().recip();
        Ok(QuantumState { labels: labels.to_vec(), amps: vec![c(a, 0.0); dim] })
    }

    pub fn from_amplitudes(labels: Vec<Vertex>, amps: Vec<Complex64>) -> Result<Self> {
        if labels.len() > MAX_QUBITS {
            return Err(Error::SizeBound { size: labels.len(), bound: MAX_QUBITS });
        }
        if amps.len() != 1 << labels.len() || !labels.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::VertexSetMismatch);
        }
        Ok(QuantumState { labels, amps })
    }

    pub fn labels(&self) -> &[Vertex] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn qubit(&self, v: Vertex) -> Result<usize> {
        self.labels.binary_search(&v).map_err(|_| Error::UnknownVertex(v))
    }

    fn apply_1q_idx(&mut self, q: usize, m: &Mat2) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    pub fn apply_1q(&mut self, v: Vertex, m: &Mat2) -> Result<()> {
        let q = self.qubit(v)?;
        self.apply_1q_idx(q, m);
        Ok(())
    }

    pub fn apply_cz(&mut self, u: Vertex, v: Vertex) -> Result<()> {
        let mask = (1usize << self.qubit(u)?) | (1usize << self.qubit(v)?);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *a = -*a;
            }
        }
        Ok(())
    }

    /// `|⟨self|other⟩|`; both states must carry the same labels.
    pub fn fidelity(&self, other: &QuantumState) -> Result<f64> {
        if self.labels != other.labels {
            return Err(Error::VertexSetMismatch);
        }
        let ip: Complex64 = self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum();
        Ok(ip.norm())
    }

    /// Projects onto the `outcome` eigenspace of the Pauli `basis` on `v`
    /// and renormalizes. Returns the state and the branch probability.
    pub fn measure_pauli(&self, v: Vertex, basis: Basis, outcome: i8) -> Result<(QuantumState, f64)> {
        let q = self.qubit(v)?;
        let s = if outcome >= 0 { 1.0 } else { -1.0 };
        let p = pauli(basis);
        let half = c(0.5, 0.0);
        let proj: Mat2 = [
            [half * (I2[0][0] + p[0][0] * s), half * (p[0][1] * s)],
            [half * (p[1][0] * s), half * (I2[1][1] + p[1][1] * s)],
        ];
        let mut out = self.clone();
        out.apply_1q_idx(q, &proj);
        let prob = out.norm().powi(2);
        if prob < MIN_PROBABILITY {
            return Err(Error::ZeroProbability(prob));
        }
        let inv = prob.sqrt().recip();
        out.amps.iter_mut().for_each(|a| *a *= inv);
        Ok((out, prob))
    }

    /// Removes qubit `v`, assumed to be in the `outcome` eigenstate of
    /// `basis`, by contracting with that eigenvector.
    pub fn discard_measured(&self, v: Vertex, basis: Basis, outcome: i8) -> Result<QuantumState> {
        let q = self.qubit(v)?;
        let s2 = std::f64::consts::FRAC_1_SQRT_2;
        let sign = if outcome >= 0 { 1.0 } else { -1.0 };
        let e: [Complex64; 2] = match basis {
            Basis::Z if outcome >= 0 => [c(1.0, 0.0), c(0.0, 0.0)],
            Basis::Z => [c(0.0, 0.0), c(1.0, 0.0)],
            Basis::X => [c(s2, 0.0), c(sign * s2, 0.0)],
            Basis::Y => [c(s2, 0.0), c(0.0, sign * s2)],
        };
        let bit = 1usize << q;
        let low = bit - 1;
        let mut amps = vec![c(0.0, 0.0); self.amps.len() / 2];
        for (j, a) in amps.iter_mut().enumerate() {
            let i0 = (j & low) | ((j & !low) << 1);
            *a = e[0].conj() * self.amps[i0] + e[1].conj() * self.amps[i0 | bit];
        }
        let labels = self.labels.iter().copied().filter(|&l| l != v).collect();
        Ok(QuantumState { labels, amps })
    }
}

/// `|+⟩^n` followed by one CZ per edge.
pub fn prepare_graph_state(g: &LabeledGraph) -> Result<QuantumState> {
    let mut st = QuantumState::plus(g.vertices())?;
    for (u, v) in g.edges() {
        st.apply_cz(u, v)?;
    }
    Ok(st)
}

/// `√(iX)` on `a` and `√(-iZ)` on each neighbor (principal roots).
pub fn apply_lc_unitary(state: &QuantumState, g: &LabeledGraph, a: Vertex) -> Result<QuantumState> {
    if state.labels() != g.vertices() {
        return Err(Error::VertexSetMismatch);
    }
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let sqrt_ix: Mat2 = [[c(s2, 0.0), c(0.0, s2)], [c(0.0, s2), c(s2, 0.0)]];
    let sqrt_miz: Mat2 = [[c(s2, -s2), c(0.0, 0.0)], [c(0.0, 0.0), c(s2, s2)]];
    let mut out = state.clone();
    out.apply_1q(a, &sqrt_ix)?;
    for b in g.neighbors(a)? {
        out.apply_1q(b, &sqrt_miz)?;
    }
    Ok(out)
}

/// Per-qubit Cliffords mapping a state onto a target graph state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrectionAssignment {
    /// `(vertex, Clifford word)` for every affected vertex, identity included.
    pub gates: Vec<(Vertex, String)>,
    pub fidelity: f64,
}

/// Unsigned Pauli on the state's qubits as `(x mask, z mask)`.
type PauliKey = (usize, usize);

/// `⟨ψ|P|ψ⟩` for the Hermitian Pauli `i^{|x∧z|} X^x Z^z`.
fn expectation(st: &QuantumState, (x, z): PauliKey) -> f64 {
    let mut acc = c(0.0, 0.0);
    for (y, a) in st.amps.iter().enumerate() {
        let src = y ^ x;
        let sign = if (z & src).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        acc += a.conj() * st.amps[src] * sign;
    }
    let phase = match (x & z).count_ones() % 4 {
        0 => c(1.0, 0.0),
        1 => c(0.0, 1.0),
        2 => c(-1.0, 0.0),
        _ => c(0.0, -1.0),
    };
    (acc * phase).re
}

fn set_axis(key: &mut PauliKey, q: usize, axis: Basis) {
    let bit = 1usize << q;
    key.0 &= !bit;
    key.1 &= !bit;
    match axis {
        Basis::X => key.0 |= bit,
        Basis::Z => key.1 |= bit,
        Basis::Y => {
            key.0 |= bit;
            key.1 |= bit;
        }
    }
}

/// Searches the 24 single-qubit Cliffords on each `affected` vertex for a
/// product mapping `post` onto `|target⟩` up to global phase.
///
/// Each Clifford is a Pauli times one of six coset representatives. For a
/// choice of representatives, the target's stabilizer generators are
/// pulled back and must stabilize `post` up to sign. The Pauli part then
/// follows from a Walsh–Hadamard transform of `⟨target|Z_S|·⟩`. It is
/// moved into the affected set with target stabilizers where needed. The
/// assembled assignment is checked by direct fidelity.
pub fn find_local_correction(
    post: &QuantumState,
    target: &LabeledGraph,
    affected: &[Vertex],
) -> Result<Option<CorrectionAssignment>> {
    if post.labels() != target.vertices() {
        return Err(Error::VertexSetMismatch);
    }
    if affected.len() > MAX_AFFECTED {
        return Err(Error::SizeBound { size: affected.len(), bound: MAX_AFFECTED });
    }
    let aq: Vec<usize> = affected.iter().map(|&v| post.qubit(v)).collect::<Result<_>>()?;
    let n = post.qubits();
    let target_state = prepare_graph_state(target)?;
    let generators: Vec<PauliKey> = (0..n)
        .map(|j| (1usize << j, target.neighbors_idx(j).fold(0, |m, i| m | 1 << i)))
        .collect();
    let reps = coset_representatives();
    let cliffords = single_qubit_cliffords();
    let mut cache: HashMap<PauliKey, bool> = HashMap::new();
    let k = aq.len();
    for code in 0..6usize.pow(k as u32) {
        let choice: Vec<usize> = (0..k).map(|i| code / 6usize.pow(i as u32) % 6).collect();
        // R† K_j R must stabilize post (up to sign) for every generator.
        let ok = generators.iter().all(|&gen| {
            let mut pulled = gen;
            for (i, &q) in aq.iter().enumerate() {
                let bit = 1usize << q;
                let axis = match (gen.0 & bit != 0, gen.1 & bit != 0) {
                    (false, false) => continue,
                    (true, false) => Basis::X,
                    (false, true) => Basis::Z,
                    (true, true) => Basis::Y,
                };
                let idx = Basis::ALL.iter().position(|&b| b == axis).unwrap();
                set_axis(&mut pulled, q, reps[choice[i]].1[idx]);
            }
            *cache
                .entry(pulled)
                .or_insert_with(|| (expectation(post, pulled).abs() - 1.0).abs() < 1e-6)
        });
        if !ok {
            continue;
        }
        let mut rotated = post.clone();
        for (i, &q) in aq.iter().enumerate() {
            rotated.apply_1q_idx(q, &cliffords[reps[choice[i]].0].matrix);
        }
        let Some(s) = z_byproduct(&rotated, &target_state) else {
            continue;
        };
        let Some((xs, zs)) = localize(s, &generators, &aq) else {
            continue;
        };
        let mut gates = Vec::with_capacity(k);
        let mut corrected = post.clone();
        for (i, &q) in aq.iter().enumerate() {
            let bit = 1usize << q;
            let mut p = I2;
            if zs & bit != 0 {
                p = mul(&PZ, &p);
            }
            if xs & bit != 0 {
                p = mul(&PX, &p);
            }
            let m = mul(&p, &cliffords[reps[choice[i]].0].matrix);
            let which = cliffords.iter().find(|cl| key(&cl.matrix) == key(&m)).expect("closed group");
            corrected.apply_1q_idx(q, &which.matrix);
            gates.push((affected[i], which.name.clone()));
        }
        let fidelity = corrected.fidelity(&target_state)?;
        if fidelity >= 1.0 - FIDELITY_TOLERANCE {
            return Ok(Some(CorrectionAssignment { gates, fidelity }));
        }
    }
    Ok(None)
}

/// `S` with `Z_S |state⟩ ∝ |target⟩`, from the Walsh–Hadamard transform of
/// `conj(target) · state`.
fn z_byproduct(state: &QuantumState, target: &QuantumState) -> Option<usize> {
    let mut f: Vec<Complex64> = target.amps.iter().zip(&state.amps).map(|(t, s)| t.conj() * s).collect();
    let mut h = 1;
    while h < f.len() {
        for i in (0..f.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (f[j], f[j + h]);
                f[j] = a + b;
                f[j + h] = a - b;
            }
        }
        h *= 2;
    }
    let (s, best) = f.iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))?;
    (best.norm() >= 1.0 - FIDELITY_TOLERANCE).then_some(s)
}

/// Rewrites `Z_S` as `X_T Z_{S ⊕ N(T)}` (equal on the target state up to
/// phase) with both masks inside the affected qubits.
fn localize(s: usize, generators: &[PauliKey], aq: &[usize]) -> Option<(usize, usize)> {
    let inside: usize = aq.iter().fold(0, |m, &q| m | 1 << q);
    for t in 0..1usize << aq.len() {
        let mut x = 0;
        let mut z = s;
        for (i, &q) in aq.iter().enumerate() {
            if t >> i & 1 == 1 {
                x |= 1 << q;
                z ^= generators[q].1;
            }
        }
        if z & !inside == 0 {
            return Some((x, z));
        }
    }
    None
}

/// Result of checking one graph against the quantum oracle.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SweepStats {
    pub graphs: usize,
    pub lc_checks: usize,
    pub branches: usize,
    pub skipped_zero_probability: usize,
    pub failures: Vec<String>,
}

impl SweepStats {
    pub fn merge(&mut self, other: SweepStats) {
        self.graphs += other.graphs;
        self.lc_checks += other.lc_checks;
        self.branches += other.branches;
        self.skipped_zero_probability += other.skipped_zero_probability;
        self.failures.extend(other.failures);
    }
}

/// Vertices that may need a correction after measuring `v`: its former
/// neighbors, plus those of the pivot `w` for an X-measurement. The
/// pivot's side is needed for outcome -1, where a Z lands on
/// `N_w \ N_v \ {v}`.
pub fn correction_support(g: &LabeledGraph, v: Vertex, w: Option<Vertex>) -> Result<Vec<Vertex>> {
    let mut set = g.neighborhood(v)?;
    if let Some(w) = w {
        set.extend(g.neighborhood(w)?);
    }
    set.remove(&v);
    Ok(set.into_iter().collect())
}

/// Checks, for one graph, that every LC unitary prepares the locally
/// complemented graph state and that every measurement branch (each
/// basis, each X pivot, both outcomes) is locally Clifford-equivalent to
/// the graph predicted by the rewrite rules, with corrections confined to
/// [`correction_support`].
pub fn check_graph(g: &LabeledGraph) -> Result<SweepStats> {
    let mut stats = SweepStats { graphs: 1, ..Default::default() };
    let state = prepare_graph_state(g)?;
    let tag = crate::format::to_graph6(g);
    for &a in g.vertices() {
        let u = apply_lc_unitary(&state, g, a)?;
        let want = prepare_graph_state(&g.local_complement(a)?)?;
        stats.lc_checks += 1;
        let f = u.fidelity(&want)?;
        if f < 1.0 - FIDELITY_TOLERANCE {
            stats.failures.push(format!("{tag}: LC unitary at {a} has fidelity {f}"));
        }
    }
    for &v in g.vertices() {
        let nbrs = g.neighbors(v)?;
        let mut branches: Vec<(Basis, Option<Vertex>)> = vec![(Basis::Z, None), (Basis::Y, None)];
        if nbrs.is_empty() {
            branches.push((Basis::X, None));
        }
        branches.extend(nbrs.iter().map(|&w| (Basis::X, Some(w))));
        for (basis, w) in branches {
            let step = crate::graph::MeasurementStep { vertex: v, basis, neighbor: w };
            let predicted = g.measure(&step)?;
            for outcome in [1i8, -1] {
                let (post, prob) = match state.measure_pauli(v, basis, outcome) {
                    Ok(r) => r,
                    Err(Error::ZeroProbability(_)) if nbrs.is_empty() && basis == Basis::X => {
                        stats.skipped_zero_probability += 1;
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                stats.branches += 1;
                let trivial = nbrs.is_empty() && basis == Basis::X;
                if !trivial && (prob - 0.5).abs() > 1e-9 {
                    stats.failures.push(format!("{tag}: {basis}{v} outcome {outcome} has probability {prob}"));
                }
                let rest = post.discard_measured(v, basis, outcome)?;
                if (rest.norm() - 1.0).abs() > 1e-10 {
                    stats.failures.push(format!("{tag}: {basis}{v} lost normalization"));
                }
                let affected = correction_support(g, v, w)?;
                if find_local_correction(&rest, &predicted, &affected)?.is_none() {
                    stats.failures.push(format!(
                        "{tag}: {basis}{v} (pivot {w:?}) outcome {outcome} has no correction on {affected:?}"
                    ));
                }
            }
        }
    }
    Ok(stats)
}
