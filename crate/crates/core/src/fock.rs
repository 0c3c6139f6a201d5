//! Identical fermions on lattice sites, in first and second quantization.
//!
//! Each fermion carries a spin `χ ∈ {0, 1}` and a site label `λ`. Modes are
//! ordered site-major with spin 0 before spin 1, so for sites `(r, s)` the
//! modes are `0r, 1r, 0s, 1s` with indices `0..4`. A single-particle state in
//! first quantization uses the same index. Fermionic signs follow this order:
//! `a†_m` picks up `(-1)^k` where `k` is the number of occupied modes with a
//! smaller index.
//!
//! When every site holds exactly one particle, the occupation state
//! `a†_{χ_1 λ_1} a†_{χ_2 λ_2} ... |0⟩` (sites in order) is the qubit basis state
//! `|χ_1 χ_2 ...⟩`. With site-major ordering that product is already in
//! ascending mode order, so the embedding carries no sign.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::hilbert::{Assignment, NodeOrder, StateVector, C64};
use crate::network::{Gate, Network};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode {
    pub spin: bool,
    pub site: usize,
}

impl Mode {
    pub fn index(self) -> usize {
        self.site * 2 + usize::from(self.spin)
    }

    pub fn from_index(index: usize) -> Self {
        Mode {
            spin: index % 2 == 1,
            site: index / 2,
        }
    }
}

/// Sites and their two spin modes each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeBasis {
    sites: Vec<String>,
}

impl ModeBasis {
    pub fn new<I, S>(sites: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let order = NodeOrder::new(sites)?;
        if order.len() > 16 {
            return Err(Error::Unsupported("more than 16 sites".into()));
        }
        Ok(ModeBasis {
            sites: order.names().to_vec(),
        })
    }

    pub fn sites(&self) -> &[String] {
        &self.sites
    }

    pub fn n_modes(&self) -> usize {
        2 * self.sites.len()
    }

    /// Dimension of the full Fock space, `2^modes`.
    pub fn fock_dim(&self) -> usize {
        1 << self.n_modes()
    }

    pub fn mode(&self, spin: bool, site: &str) -> Result<Mode> {
        let site = self
            .sites
            .iter()
            .position(|s| s == site)
            .ok_or_else(|| Error::UnknownNode(site.to_string()))?;
        Ok(Mode { spin, site })
    }

    pub fn modes(&self) -> Vec<Mode> {
        (0..self.n_modes()).map(Mode::from_index).collect()
    }

    pub fn qubit_order(&self) -> NodeOrder {
        NodeOrder::new(self.sites.clone()).expect("sites are unique")
    }

    /// Occupation bitmasks holding exactly `n` particles, ascending.
    pub fn occupations_with(&self, n: usize) -> Vec<u64> {
        (0..self.fock_dim() as u64)
            .filter(|o| o.count_ones() as usize == n)
            .collect()
    }
}

/// How ladder operators assign signs; `Unsigned` drops the parity factor
/// and exists to show that the second-quantized forms depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignConvention {
    ModeOrderParity,
    Unsigned,
}

/// A superposition over occupation-number states, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    basis: ModeBasis,
    amps: Vec<C64>,
}

impl FockVector {
    pub fn zero(basis: &ModeBasis) -> Self {
        FockVector {
            basis: basis.clone(),
            amps: vec![ZERO; basis.fock_dim()],
        }
    }

    pub fn vacuum(basis: &ModeBasis) -> Self {
        Self::occupation(basis, 0)
    }

    pub fn occupation(basis: &ModeBasis, occ: u64) -> Self {
        let mut v = Self::zero(basis);
        v.amps[occ as usize] = C64::new(1.0, 0.0);
        v
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amp(&self, occ: u64) -> C64 {
        self.amps[occ as usize]
    }

    /// Occupations with nonzero amplitude.
    pub fn support(&self) -> Vec<u64> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(o, _)| o as u64)
            .collect()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &FockVector) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, c: C64) -> FockVector {
        FockVector {
            basis: self.basis.clone(),
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &FockVector) -> FockVector {
        FockVector {
            basis: self.basis.clone(),
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &FockVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn ladder(&self, mode: Mode, creation: bool, conv: SignConvention) -> FockVector {
        let m = mode.index();
        let mut out = Self::zero(&self.basis);
        for (occ, &a) in self.amps.iter().enumerate() {
            if a == ZERO {
                continue;
            }
            let occupied = (occ >> m) & 1 == 1;
            if occupied == creation {
                continue;
            }
            let sign = match conv {
                SignConvention::ModeOrderParity if (occ & ((1 << m) - 1)).count_ones() % 2 == 1 => -1.0,
                _ => 1.0,
            };
            out.amps[occ ^ (1 << m)] += a * sign;
        }
        out
    }

    pub fn create(&self, mode: Mode) -> FockVector {
        self.ladder(mode, true, SignConvention::ModeOrderParity)
    }

    pub fn annihilate(&self, mode: Mode) -> FockVector {
        self.ladder(mode, false, SignConvention::ModeOrderParity)
    }

    pub fn create_with(&self, mode: Mode, conv: SignConvention) -> FockVector {
        self.ladder(mode, true, conv)
    }

    pub fn annihilate_with(&self, mode: Mode, conv: SignConvention) -> FockVector {
        self.ladder(mode, false, conv)
    }

    /// Applies `a†_{m_1} a†_{m_2} ... |self⟩`, rightmost operator first.
    pub fn create_all(&self, modes: &[Mode]) -> FockVector {
        modes.iter().rev().fold(self.clone(), |v, &m| v.create(m))
    }
}

/// `a†_mode |state⟩`.
pub fn create(mode: Mode, state: &FockVector) -> FockVector {
    state.create(mode)
}

pub fn annihilate(mode: Mode, state: &FockVector) -> FockVector {
    state.annihilate(mode)
}

/// Qubit assignment of an occupation with exactly one particle per site.
pub fn embed_qubit(basis: &ModeBasis, occ: u64) -> Option<Assignment> {
    let bits = (0..basis.sites.len())
        .map(|site| match (occ >> (2 * site)) & 0b11 {
            0b01 => Some(false),
            0b10 => Some(true),
            _ => None,
        })
        .collect::<Option<Vec<bool>>>()?;
    if occ >> basis.n_modes() != 0 {
        return None;
    }
    Some(Assignment::new(bits))
}

/// Occupation of the qubit basis state `assignment` (one particle per site).
pub fn qubit_occupation(assignment: &Assignment) -> u64 {
    assignment
        .bits()
        .iter()
        .enumerate()
        .fold(0u64, |acc, (site, &spin)| acc | 1 << (2 * site + usize::from(spin)))
}

/// Qubit image of a superposition supported in the one-particle-per-site
/// sector, or `None` if any amplitude lies outside it.
pub fn embed_qubit_vector(v: &FockVector) -> Option<StateVector> {
    let order = v.basis.qubit_order();
    let mut out = StateVector::zeros(order.clone());
    for occ in v.support() {
        let a = embed_qubit(&v.basis, occ)?;
        let k = order.basis_index(&a).expect("same length");
        out.amps_mut()[k] = v.amp(occ);
    }
    Some(out)
}

/// Inverse of [`embed_qubit_vector`].
pub fn lift_qubit_vector(basis: &ModeBasis, v: &StateVector) -> Result<FockVector> {
    if v.order().names() != basis.sites() {
        return Err(Error::NodeOrderMismatch);
    }
    let mut out = FockVector::zero(basis);
    for (k, &a) in v.amps().iter().enumerate() {
        out.amps[qubit_occupation(&v.order().assignment(k)) as usize] = a;
    }
    Ok(out)
}

/// Permutations of `0..n` paired with their signs.
fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !prefix.contains(&i) {
                prefix.push(i);
                rec(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut all = Vec::new();
    rec(&mut Vec::new(), n, &mut all);
    all.into_iter()
        .map(|p| {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
            (p, sign)
        })
        .collect()
}

fn digits(mut index: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in (0..n).rev() {
        out[slot] = index % d;
        index /= d;
    }
    out
}

fn undigits(ds: &[usize], d: usize) -> usize {
    ds.iter().fold(0, |acc, &x| acc * d + x)
}

/// Operator permuting particle slots: particle `i` takes the state of
/// particle `perm[i]`.
pub fn permutation_operator(perm: &[usize], single_dim: usize) -> DMatrix<f64> {
    let n = perm.len();
    let dim = single_dim.pow(n as u32);
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim {
        let ds = digits(col, single_dim, n);
        let permuted: Vec<usize> = perm.iter().map(|&p| ds[p]).collect();
        m[(undigits(&permuted, single_dim), col)] = 1.0;
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectorKind {
    Symmetrizer,
    Antisymmetrizer,
}

/// `(1/n!) Σ_σ (±1)^σ P_σ` over the n-particle tensor space.
#[derive(Debug, Clone, PartialEq)]
pub struct PermutationProjector {
    pub n_particles: usize,
    pub single_dim: usize,
    pub kind: ProjectorKind,
    pub matrix: DMatrix<f64>,
}

impl PermutationProjector {
    pub fn build(n_particles: usize, single_dim: usize, kind: ProjectorKind) -> Self {
        let dim = single_dim.pow(n_particles as u32);
        let perms = permutations(n_particles);
        let norm = 1.0 / perms.len() as f64;
        let mut matrix = DMatrix::zeros(dim, dim);
        for (p, sign) in &perms {
            let s = match kind {
                ProjectorKind::Symmetrizer => 1.0,
                ProjectorKind::Antisymmetrizer => *sign,
            };
            matrix += permutation_operator(p, single_dim) * (s * norm);
        }
        PermutationProjector {
            n_particles,
            single_dim,
            kind,
            matrix,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    pub fn is_idempotent(&self, tol: f64) -> bool {
        (&self.matrix * &self.matrix - &self.matrix).amax() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (&self.matrix - self.matrix.transpose()).amax() <= tol
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        self.matrix.map(|x| C64::new(x, 0.0)) * v
    }
}

/// `S₁₂ = ½(1 + P₁₂)` on two two-state particles.
pub fn symmetrizer_two() -> PermutationProjector {
    PermutationProjector::build(2, 2, ProjectorKind::Symmetrizer)
}

/// Antisymmetrizer for `n ∈ {2, 3}` fermions with `single_dim` states each.
pub fn antisymmetrizer(n: usize, single_dim: usize) -> Result<PermutationProjector> {
    if !(2..=3).contains(&n) {
        return Err(Error::Unsupported(format!("antisymmetrizer for {n} particles")));
    }
    if single_dim == 0 || single_dim > 16 {
        return Err(Error::Unsupported(format!("{single_dim} single-particle states")));
    }
    Ok(PermutationProjector::build(n, single_dim, ProjectorKind::Antisymmetrizer))
}

/// First-quantization image of an occupation state with `n` particles:
/// `a†_{m_1}...a†_{m_n}|0⟩` (ascending modes) maps to
/// `(1/√n!) Σ_σ sgn(σ) |m_σ(1)⟩...|m_σ(n)⟩`.
pub fn first_quantize(v: &FockVector, n: usize) -> Result<DVector<C64>> {
    let d = v.basis.n_modes();
    let dim = d.pow(n as u32);
    let perms = permutations(n);
    let norm = 1.0 / (perms.len() as f64).sqrt();
    let mut out = DVector::from_element(dim, ZERO);
    for occ in v.support() {
        if occ.count_ones() as usize != n {
            return Err(Error::InvalidArgument(format!(
                "occupation {occ:b} does not hold {n} particles"
            )));
        }
        let modes: Vec<usize> = (0..d).filter(|m| (occ >> m) & 1 == 1).collect();
        for (p, sign) in &perms {
            let slots: Vec<usize> = p.iter().map(|&i| modes[i]).collect();
            out[undigits(&slots, d)] += v.amp(occ) * (sign * norm);
        }
    }
    Ok(out)
}

/// One of the six two-fermion states on sites `(r, s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedFockState {
    pub label: char,
    /// Over the 16-dim tensor basis `(site·2 + spin)₁ ⊗ (site·2 + spin)₂`.
    pub first_quant: DVector<C64>,
    pub occupation: FockVector,
}

pub fn two_site_basis() -> ModeBasis {
    ModeBasis::new(["r", "s"]).expect("static")
}

fn spin_site_product(spin: &[(usize, usize, f64)], site: &[(usize, usize, f64)]) -> DVector<C64> {
    let mut v = DVector::from_element(16, ZERO);
    for &(x1, x2, cs) in spin {
        for &(l1, l2, cl) in site {
            let p1 = l1 * 2 + x1;
            let p2 = l2 * 2 + x2;
            v[p1 * 4 + p2] += C64::new(cs * cl, 0.0);
        }
    }
    v
}

/// The antisymmetric basis `|a⟩ ... |f⟩` for two fermions on two sites,
/// built independently in both pictures.
pub fn fock_basis_two() -> Vec<NamedFockState> {
    let basis = two_site_basis();
    let (r, s) = (0, 1);
    let h = FRAC_1_SQRT_2;
    let singlet = [(0, 1, h), (1, 0, -h)];
    let same = |spin: usize| [(spin, spin, 1.0)];
    let site_anti = [(r, s, h), (s, r, -h)];
    let site_sym = [(r, s, h), (s, r, h)];
    let spin_sym = [(0, 1, h), (1, 0, h)];

    let m = |spin: u8, site: usize| Mode {
        spin: spin == 1,
        site,
    };
    let vac = FockVector::vacuum(&basis);
    let pair = |x: Mode, y: Mode| vac.create_all(&[x, y]);
    let e1 = pair(m(0, r), m(1, s));
    let e2 = pair(m(1, r), m(0, s));
    let hc = C64::new(h, 0.0);

    vec![
        NamedFockState {
            label: 'a',
            first_quant: spin_site_product(&singlet, &[(r, r, 1.0)]),
            occupation: pair(m(0, r), m(1, r)),
        },
        NamedFockState {
            label: 'b',
            first_quant: spin_site_product(&singlet, &[(s, s, 1.0)]),
            occupation: pair(m(0, s), m(1, s)),
        },
        NamedFockState {
            label: 'c',
            first_quant: spin_site_product(&same(0), &site_anti),
            occupation: pair(m(0, r), m(0, s)),
        },
        NamedFockState {
            label: 'd',
            first_quant: spin_site_product(&same(1), &site_anti),
            occupation: pair(m(1, r), m(1, s)),
        },
        NamedFockState {
            label: 'e',
            first_quant: spin_site_product(&spin_sym, &site_anti),
            occupation: e1.add(&e2).scale(hc),
        },
        NamedFockState {
            label: 'f',
            first_quant: spin_site_product(&singlet, &site_sym),
            occupation: e1.add(&e2.scale(C64::new(-1.0, 0.0))).scale(hc),
        },
    ]
}

/// Penalty energies of the two-site link Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkEnergies {
    pub base: f64,
    pub ea: f64,
    pub eb: f64,
    pub ec: f64,
    pub ed: f64,
}

impl Default for LinkEnergies {
    fn default() -> Self {
        LinkEnergies::uniform(1.0)
    }
}

impl LinkEnergies {
    pub fn uniform(e: f64) -> Self {
        LinkEnergies {
            base: e,
            ea: e,
            eb: e,
            ec: e,
            ed: e,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.base > 0.0) {
            return Err(Error::InvalidEnergy {
                name: "E".into(),
                value: self.base,
            });
        }
        for (name, v) in [("E_a", self.ea), ("E_b", self.eb), ("E_c", self.ec), ("E_d", self.ed)] {
            if !(v >= self.base) || !v.is_finite() {
                return Err(Error::InvalidEnergy {
                    name: name.into(),
                    value: v,
                });
            }
        }
        Ok(())
    }
}

/// Link Hamiltonian as its eigenvalues on `(|a⟩, ..., |f⟩)`.
pub fn hrs_fock(params: &LinkEnergies) -> Result<[f64; 6]> {
    params.validate()?;
    Ok([params.ea, params.eb, params.ec, params.ed, 0.0, 0.0])
}

/// A normal-ordered product `coeff · a†_{c_1}...a†_{c_k} a_{d_1}...a_{d_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderTerm {
    pub coeff: f64,
    pub creators: Vec<Mode>,
    pub annihilators: Vec<Mode>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FockOperator {
    pub terms: Vec<LadderTerm>,
}

impl FockOperator {
    pub fn apply(&self, v: &FockVector) -> FockVector {
        self.apply_with(v, SignConvention::ModeOrderParity)
    }

    pub fn apply_with(&self, v: &FockVector, conv: SignConvention) -> FockVector {
        let mut out = FockVector::zero(v.basis());
        for t in &self.terms {
            let mut w = v.clone();
            for &m in t.annihilators.iter().rev() {
                w = w.annihilate_with(m, conv);
            }
            for &m in t.creators.iter().rev() {
                w = w.create_with(m, conv);
            }
            out = out.add(&w.scale(C64::new(t.coeff, 0.0)));
        }
        out
    }

    /// Matrix elements `⟨states[i]|H|states[j]⟩`.
    pub fn matrix_on(&self, states: &[FockVector], conv: SignConvention) -> DMatrix<C64> {
        let n = states.len();
        let images: Vec<FockVector> = states.iter().map(|s| self.apply_with(s, conv)).collect();
        DMatrix::from_fn(n, n, |i, j| states[i].inner(&images[j]))
    }
}

/// `(a†_{m_1}...a†_{m_n})(a_{m_1}...a_{m_n})` acts on `|m_1...m_n⟩` as
/// `(-1)^{n(n-1)/2}`; the returned factor makes the term a positive projector.
fn projector_sign(n: usize) -> f64 {
    if (n * n.saturating_sub(1) / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Second-quantized link Hamiltonian
/// `-(E_a a†0r a†1r a0r a1r + E_b ... + E_c a†0r a†0s a0r a0s + E_d ...)`.
pub fn hrs_second_quantized(params: &LinkEnergies) -> Result<FockOperator> {
    params.validate()?;
    let m = |spin: u8, site: usize| Mode {
        spin: spin == 1,
        site,
    };
    let term = |e: f64, x: Mode, y: Mode| LadderTerm {
        coeff: -e,
        creators: vec![x, y],
        annihilators: vec![x, y],
    };
    Ok(FockOperator {
        terms: vec![
            term(params.ea, m(0, 0), m(1, 0)),
            term(params.eb, m(0, 1), m(1, 1)),
            term(params.ec, m(0, 0), m(0, 1)),
            term(params.ed, m(1, 0), m(1, 1)),
        ],
    })
}

/// Checks that the second-quantized link Hamiltonian reproduces the
/// diagonal of [`hrs_fock`] on `|a⟩...|f⟩`.
pub fn verify_second_quantization(params: &LinkEnergies) -> bool {
    verify_second_quantization_with(params, SignConvention::ModeOrderParity)
}

pub fn verify_second_quantization_with(params: &LinkEnergies, conv: SignConvention) -> bool {
    let (Ok(diag), Ok(op)) = (hrs_fock(params), hrs_second_quantized(params)) else {
        return false;
    };
    let states: Vec<FockVector> = fock_basis_two().into_iter().map(|s| s.occupation).collect();
    let m = op.matrix_on(&states, conv);
    (0..6).all(|i| {
        (0..6).all(|j| {
            let expect = if i == j { diag[i] } else { 0.0 };
            (m[(i, j)] - C64::new(expect, 0.0)).norm() <= TOL
        })
    })
}

/// Penalty Hamiltonian for a gate in second quantization: one term per
/// `n`-particle occupation that is either not one-per-site or embeds to a
/// non-row. Sites are the gate's nodes, inputs first.
pub fn gate_second_quantized(net: &Network, gate: &Gate, energy: f64) -> Result<(ModeBasis, FockOperator)> {
    if !(energy > 0.0) {
        return Err(Error::InvalidEnergy {
            name: "E".into(),
            value: energy,
        });
    }
    let _ = net;
    let basis = ModeBasis::new(gate.nodes().cloned())?;
    let n = basis.sites().len();
    let sign = projector_sign(n);
    let terms = basis
        .occupations_with(n)
        .into_iter()
        .filter(|&occ| match embed_qubit(&basis, occ) {
            None => true,
            Some(a) => !gate.accepts_local(crate::network::pack(a.bits())),
        })
        .map(|occ| {
            let modes: Vec<Mode> = (0..basis.n_modes())
                .filter(|m| (occ >> m) & 1 == 1)
                .map(Mode::from_index)
                .collect();
            LadderTerm {
                coeff: sign * energy,
                creators: modes.clone(),
                annihilators: modes,
            }
        })
        .collect();
    Ok((basis, FockOperator { terms }))
}

/// Qubit assignments (over the gate's nodes) where the second-quantized gate
/// Hamiltonian has zero energy, plus the count of all `n`-particle states it
/// was evaluated on.
pub fn gate_fock_ground_assignments(net: &Network, gate: &Gate, energy: f64) -> Result<(Vec<Assignment>, usize)> {
    let (basis, op) = gate_second_quantized(net, gate, energy)?;
    let n = basis.sites().len();
    let occs = basis.occupations_with(n);
    let mut ground = Vec::new();
    for &occ in &occs {
        let v = FockVector::occupation(&basis, occ);
        let hv = op.apply(&v);
        let diag = v.inner(&hv);
        let off = hv.add(&v.scale(-diag)).norm();
        if off > TOL {
            return Err(Error::InvalidArgument("gate Hamiltonian is not diagonal".into()));
        }
        if diag.norm() <= TOL {
            match embed_qubit(&basis, occ) {
                Some(a) => ground.push(a),
                None => {
                    return Err(Error::InvalidArgument(
                        "zero-energy state outside the one-per-site sector".into(),
                    ))
                }
            }
        }
    }
    ground.sort();
    Ok((ground, occs.len()))
}

/// Matrix of `a†_m` (or `a_m`) on the full Fock space.
pub fn ladder_matrix(basis: &ModeBasis, mode: Mode, creation: bool) -> DMatrix<f64> {
    let dim = basis.fock_dim();
    let mut m = DMatrix::zeros(dim, dim);
    for col in 0..dim as u64 {
        let v = FockVector::occupation(basis, col);
        let w = if creation { v.create(mode) } else { v.annihilate(mode) };
        for occ in w.support() {
            m[(occ as usize, col as usize)] = w.amp(occ).re;
        }
    }
    m
}
