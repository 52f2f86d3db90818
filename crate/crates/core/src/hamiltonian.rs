//! Hamiltonians as weighted Pauli strings, benchmark models and the text format.
//!
//! Coefficients are stored in the unnormalized Pauli convention, i.e. a term is
//! `coeff · σ_{α_1} ⊗ … ⊗ σ_{α_N}`. The coefficient of the same term in the
//! normalized basis `O_α = σ_α/√2` is `coeff · 2^{N/2}` and is available via
//! [`PauliTerm::basis_coeff`].

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::pauli_algebra::{pauli_matrix, BasisCode, StructureTensor, Variant};

/// Physical space each site of a [`HamiltonianSpec`] acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LocalSpace {
    /// Two-level site; codes act as Pauli matrices.
    Qubit,
    /// Four-level site; codes act as lifted basis operators of the given variant.
    Ququart(Variant),
}

impl LocalSpace {
    pub fn dim(self) -> usize {
        match self {
            LocalSpace::Qubit => 2,
            LocalSpace::Ququart(_) => 4,
        }
    }

    /// Site operator of a code with the `1/√2` basis normalization stripped:
    /// `σ_α` on qubits and `√2 Õ_α` on ququarts. For the averaged lift this is
    /// the site-wise mean table; see [`LocalSpace::product_expansion`] for how
    /// strings are built.
    pub fn site_matrix(self, code: BasisCode) -> DMatrix<C64> {
        match self {
            LocalSpace::Qubit => {
                let m = pauli_matrix(code);
                DMatrix::from_fn(2, 2, |i, j| m[(i, j)])
            }
            LocalSpace::Ququart(v) => {
                let m = StructureTensor::pauli().lifted_matrix(v, code) * C64::from(std::f64::consts::SQRT_2);
                DMatrix::from_fn(4, 4, |i, j| m[(i, j)])
            }
        }
    }

    /// Operator norm of [`LocalSpace::site_matrix`].
    pub fn site_norm(self, code: BasisCode) -> f64 {
        self.site_matrix(code).singular_values().max()
    }

    /// Spaces whose site matrices multiply out a code string:
    /// the string operator is `Σ_p w_p ⊗_k site_matrix_p(code_k)`.
    ///
    /// The averaged lift is the mean of the left and right lifted operators,
    /// which differs from the product of site-wise means once a string acts
    /// on more than one site.
    pub fn product_expansion(self) -> Vec<(f64, LocalSpace)> {
        match self {
            LocalSpace::Ququart(Variant::Averaged) => vec![
                (0.5, LocalSpace::Ququart(Variant::Left)),
                (0.5, LocalSpace::Ququart(Variant::Right)),
            ],
            other => vec![(1.0, other)],
        }
    }

    /// Upper bound on the operator norm of a code string.
    pub fn string_norm_bound(self, codes: &[BasisCode]) -> f64 {
        self.product_expansion()
            .iter()
            .map(|(w, sp)| w * codes.iter().filter(|c| !c.is_identity()).map(|&c| sp.site_norm(c)).product::<f64>())
            .sum()
    }
}

/// One weighted string of basis codes.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm {
    pub coeff: C64,
    pub codes: Vec<BasisCode>,
}

impl PauliTerm {
    pub fn new(coeff: impl Into<C64>, codes: Vec<BasisCode>) -> Self {
        PauliTerm { coeff: coeff.into(), codes }
    }

    /// Builds a term from a code string such as `"XZII"`.
    pub fn from_str(coeff: impl Into<C64>, codes: &str) -> Result<Self> {
        let codes = codes
            .chars()
            .map(|c| BasisCode::from_char(c).ok_or_else(|| Error::InvalidHamiltonian(format!("bad code {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(PauliTerm::new(coeff, codes))
    }

    /// Term acting with `code` on the listed sites and identity elsewhere.
    pub fn on_sites(coeff: impl Into<C64>, n: usize, sites: &[(usize, BasisCode)]) -> Self {
        let mut codes = vec![BasisCode::IDENTITY; n];
        for &(s, c) in sites {
            codes[s] = c;
        }
        PauliTerm::new(coeff, codes)
    }

    /// Coefficient in the normalized `O_α` basis.
    pub fn basis_coeff(&self) -> C64 {
        self.coeff * 2f64.powf(self.codes.len() as f64 / 2.0)
    }

    /// Sites carrying a non-identity code.
    pub fn support(&self) -> Vec<usize> {
        self.codes.iter().enumerate().filter(|(_, c)| !c.is_identity()).map(|(i, _)| i).collect()
    }

    pub fn code_string(&self) -> String {
        self.codes.iter().map(|c| c.to_char()).collect()
    }
}

/// A Hamiltonian as a sum of [`PauliTerm`]s over `n_sites` sites.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSpec {
    n_sites: usize,
    space: LocalSpace,
    terms: Vec<PauliTerm>,
    geometry: Option<Vec<(usize, usize)>>,
}

impl HamiltonianSpec {
    /// Qubit Hamiltonian from a list of terms.
    pub fn new(n_sites: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        if n_sites == 0 {
            return Err(Error::InvalidHamiltonian("at least one site is required".into()));
        }
        for (k, t) in terms.iter().enumerate() {
            if t.codes.len() != n_sites {
                return Err(Error::InvalidHamiltonian(format!(
                    "term {k} has {} codes, expected {n_sites}",
                    t.codes.len()
                )));
            }
            if !(t.coeff.re.is_finite() && t.coeff.im.is_finite()) {
                return Err(Error::InvalidHamiltonian(format!("term {k} has a non-finite coefficient")));
            }
        }
        Ok(HamiltonianSpec { n_sites, space: LocalSpace::Qubit, terms, geometry: None })
    }

    /// The zero Hamiltonian.
    pub fn zero(n_sites: usize) -> Result<Self> {
        Self::new(n_sites, Vec::new())
    }

    /// `c · I`.
    pub fn identity(n_sites: usize, c: f64) -> Result<Self> {
        Self::new(n_sites, vec![PauliTerm::new(c, vec![BasisCode::IDENTITY; n_sites])])
    }

    pub fn with_geometry(mut self, edges: Vec<(usize, usize)>) -> Self {
        self.geometry = Some(edges);
        self
    }

    pub(crate) fn with_space(mut self, space: LocalSpace) -> Self {
        self.space = space;
        self
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn space(&self) -> LocalSpace {
        self.space
    }

    pub fn local_dim(&self) -> usize {
        self.space.dim()
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn geometry(&self) -> Option<&[(usize, usize)]> {
        self.geometry.as_deref()
    }

    /// `local_dim^n_sites`, or `None` on overflow.
    pub fn hilbert_dim(&self) -> Option<usize> {
        self.local_dim().checked_pow(self.n_sites as u32)
    }

    /// Sums coefficients of identical code strings.
    pub fn merged(&self) -> BTreeMap<Vec<BasisCode>, C64> {
        let mut map = BTreeMap::new();
        for t in &self.terms {
            *map.entry(t.codes.clone()).or_insert(C64::new(0.0, 0.0)) += t.coeff;
        }
        map
    }

    /// Real merged coefficients mean Hermitian, for all three lift variants as well.
    pub fn is_hermitian(&self) -> bool {
        let merged = self.merged();
        let scale = merged.values().map(|c| c.norm()).fold(1.0, f64::max);
        merged.values().all(|c| c.im.abs() <= 1e-12 * scale)
    }

    /// `scale · H + constant · I`, keeping the local space.
    pub fn affine(&self, scale: f64, constant: f64) -> HamiltonianSpec {
        let mut terms: Vec<PauliTerm> =
            self.terms.iter().map(|t| PauliTerm::new(t.coeff * scale, t.codes.clone())).collect();
        if constant != 0.0 {
            terms.push(PauliTerm::new(constant, vec![BasisCode::IDENTITY; self.n_sites]));
        }
        HamiltonianSpec { terms, ..self.clone() }
    }

    /// Serializes to the plain-text term list (`re im CODES` per line).
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# {} sites, {} terms", self.n_sites, self.terms.len());
        for t in &self.terms {
            let _ = writeln!(s, "{:e} {:e} {}", t.coeff.re, t.coeff.im, t.code_string());
        }
        s
    }
}

/// Result of [`parse_hamiltonian_file`].
#[derive(Clone, Debug)]
pub struct ParsedHamiltonian {
    pub spec: HamiltonianSpec,
    /// False when merged coefficients carry imaginary parts.
    pub hermitian: bool,
}

/// Parses the term-list format: `coeff_re coeff_im code_string` per line,
/// `#` starts a comment line.
pub fn parse_hamiltonian_file(text: &str) -> Result<ParsedHamiltonian> {
    let mut terms = Vec::new();
    let mut n_sites = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let perr = |msg: String| Error::Parse { line: lineno + 1, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(perr(format!("expected 3 fields, found {}", fields.len())));
        }
        let re: f64 = fields[0].parse().map_err(|e| perr(format!("real part: {e}")))?;
        let im: f64 = fields[1].parse().map_err(|e| perr(format!("imaginary part: {e}")))?;
        let codes = fields[2]
            .chars()
            .map(|c| match c {
                'I' | 'X' | 'Y' | 'Z' => Ok(BasisCode::from_char(c).unwrap()),
                _ => Err(perr(format!("invalid code character {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        match n_sites {
            None => n_sites = Some(codes.len()),
            Some(n) if n != codes.len() => {
                return Err(perr(format!("code string has {} sites, expected {n}", codes.len())))
            }
            _ => {}
        }
        if !(re.is_finite() && im.is_finite()) {
            return Err(perr("non-finite coefficient".into()));
        }
        terms.push(PauliTerm::new(C64::new(re, im), codes));
    }
    let n = n_sites.ok_or(Error::Parse { line: 0, msg: "no terms found".into() })?;
    let spec = HamiltonianSpec::new(n, terms)?;
    let hermitian = spec.is_hermitian();
    if !hermitian {
        log::warn!("parsed Hamiltonian is not Hermitian");
    }
    Ok(ParsedHamiltonian { spec, hermitian })
}

/// Parses a geometry file: one undirected edge `i j` per line.
pub fn parse_geometry(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut edges = Vec::new();
    let mut seen = BTreeSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let perr = |msg: String| Error::Parse { line: lineno + 1, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(perr(format!("expected 2 fields, found {}", fields.len())));
        }
        let i: usize = fields[0].parse().map_err(|e| perr(format!("{e}")))?;
        let j: usize = fields[1].parse().map_err(|e| perr(format!("{e}")))?;
        if i == j {
            return Err(perr(format!("self loop on site {i}")));
        }
        if !seen.insert((i.min(j), i.max(j))) {
            return Err(perr(format!("duplicate edge {i} {j}")));
        }
        edges.push((i, j));
    }
    if edges.is_empty() {
        return Err(Error::Parse { line: 0, msg: "no edges found".into() });
    }
    Ok(edges)
}

pub fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in edges {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

pub fn chain_edges(n: usize) -> Vec<(usize, usize)> {
    (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect()
}

pub fn triangle_edges() -> Vec<(usize, usize)> {
    vec![(0, 1), (1, 2), (0, 2)]
}

/// Three hexagons of the triangular lattice around a shared vertex (16 sites, 33 bonds).
pub fn three_hexagon_edges() -> Vec<(usize, usize)> {
    parse_geometry(include_str!("../data/three_hexagons.edges")).expect("bundled geometry parses")
}

/// Open ferromagnetic transverse-field Ising chain with spin operators `S = σ/2`:
/// `H = -Σ S^z_i S^z_{i+1} + bx Σ S^x_i + bz Σ S^z_i`.
pub fn build_tfi(n: usize, bx: f64, bz: f64) -> Result<HamiltonianSpec> {
    if n < 2 {
        return Err(Error::InvalidHamiltonian("TFI chain needs n >= 2".into()));
    }
    let mut terms = Vec::new();
    for i in 0..n - 1 {
        terms.push(PauliTerm::on_sites(-0.25, n, &[(i, BasisCode::Z), (i + 1, BasisCode::Z)]));
    }
    for i in 0..n {
        if bx != 0.0 {
            terms.push(PauliTerm::on_sites(0.5 * bx, n, &[(i, BasisCode::X)]));
        }
        if bz != 0.0 {
            terms.push(PauliTerm::on_sites(0.5 * bz, n, &[(i, BasisCode::Z)]));
        }
    }
    Ok(HamiltonianSpec::new(n, terms)?.with_geometry(chain_edges(n)))
}

/// Spin image of the open Kitaev–Hubbard chain under the Jordan–Wigner map
/// `c_j = (Π_{k<j} Z_k) σ^-_j`: `Σ X_j X_{j+1} - h Σ Z_j + u Σ Z_j Z_{j+1}`.
pub fn build_kitaev_hubbard(n: usize, h: f64, u: f64) -> Result<HamiltonianSpec> {
    if n < 2 {
        return Err(Error::InvalidHamiltonian("Kitaev-Hubbard chain needs n >= 2".into()));
    }
    let mut terms = Vec::new();
    for j in 0..n - 1 {
        terms.push(PauliTerm::on_sites(1.0, n, &[(j, BasisCode::X), (j + 1, BasisCode::X)]));
        if u != 0.0 {
            terms.push(PauliTerm::on_sites(u, n, &[(j, BasisCode::Z), (j + 1, BasisCode::Z)]));
        }
    }
    if h != 0.0 {
        for j in 0..n {
            terms.push(PauliTerm::on_sites(-h, n, &[(j, BasisCode::Z)]));
        }
    }
    Ok(HamiltonianSpec::new(n, terms)?.with_geometry(chain_edges(n)))
}

/// Antiferromagnetic transverse-field Ising model on a graph:
/// `H = Σ_<ij> S^z_i S^z_j + bx Σ S^x_i`.
pub fn build_triangular_tfi(edges: &[(usize, usize)], bx: f64) -> Result<HamiltonianSpec> {
    let n = edges.iter().map(|&(i, j)| i.max(j) + 1).max().unwrap_or(0);
    if n == 0 {
        return Err(Error::InvalidHamiltonian("empty geometry".into()));
    }
    let mut seen = BTreeSet::new();
    for &(i, j) in edges {
        if i == j || !seen.insert((i.min(j), i.max(j))) {
            return Err(Error::InvalidHamiltonian(format!("geometry is not a simple graph at edge {i} {j}")));
        }
    }
    if !is_connected(n, edges) {
        log::warn!("geometry graph is disconnected");
    }
    let mut terms: Vec<PauliTerm> = edges
        .iter()
        .map(|&(i, j)| PauliTerm::on_sites(0.25, n, &[(i, BasisCode::Z), (j, BasisCode::Z)]))
        .collect();
    if bx != 0.0 {
        terms.extend((0..n).map(|i| PauliTerm::on_sites(0.5 * bx, n, &[(i, BasisCode::X)])));
    }
    Ok(HamiltonianSpec::new(n, terms)?.with_geometry(edges.to_vec()))
}

/// Sum over terms of `|coeff| · ‖term‖`; an upper bound on every eigenvalue.
pub fn shift_constant(h: &HamiltonianSpec) -> f64 {
    let space = h.space();
    h.terms().iter().map(|t| t.coeff.norm() * space.string_norm_bound(&t.codes)).sum()
}

/// What kind of random 2-local Hamiltonian to draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RandomKind {
    /// Real coefficients on all Pauli strings: a general Hermitian matrix.
    Hermitian,
    /// Only strings with an even number of `Y`: a real symmetric matrix.
    RealSymmetric,
}

/// Random 2-local qubit Hamiltonian with Gaussian coefficients on every
/// single-site and two-site string.
pub fn random_two_local<R: Rng + ?Sized>(n: usize, kind: RandomKind, rng: &mut R) -> Result<HamiltonianSpec> {
    let paulis = [BasisCode::X, BasisCode::Y, BasisCode::Z];
    let mut terms = Vec::new();
    let allowed = |codes: &[BasisCode]| match kind {
        RandomKind::Hermitian => true,
        RandomKind::RealSymmetric => codes.iter().filter(|c| **c == BasisCode::Y).count() % 2 == 0,
    };
    for i in 0..n {
        for &a in &paulis {
            if allowed(&[a]) {
                let c: f64 = rng.sample(StandardNormal);
                terms.push(PauliTerm::on_sites(0.5 * c, n, &[(i, a)]));
            }
        }
        for j in i + 1..n {
            for &a in &paulis {
                for &b in &paulis {
                    if allowed(&[a, b]) {
                        let c: f64 = rng.sample(StandardNormal);
                        terms.push(PauliTerm::on_sites(0.5 * c, n, &[(i, a), (j, b)]));
                    }
                }
            }
        }
    }
    HamiltonianSpec::new(n, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_constant_examples() {
        let zz = HamiltonianSpec::new(2, vec![PauliTerm::from_str(-0.25, "ZZ").unwrap()]).unwrap();
        assert!((shift_constant(&zz) - 0.25).abs() < 1e-15);
        let tfi = build_tfi(3, 0.5, 0.0).unwrap();
        assert!((shift_constant(&tfi) - 1.25).abs() < 1e-15);
        let id = HamiltonianSpec::identity(4, -2.5).unwrap();
        assert!((shift_constant(&id) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn lifted_site_norms_are_one() {
        for v in Variant::ALL {
            for c in BasisCode::ALL {
                let norm = LocalSpace::Ququart(v).site_norm(c);
                assert!((norm - 1.0).abs() < 1e-12, "{v} {c}: {norm}");
            }
        }
    }

    #[test]
    fn tfi_terms() {
        let h = build_tfi(4, 0.3, 0.0).unwrap();
        assert_eq!(h.terms().len(), 3 + 4);
        assert_eq!(h.terms()[0].code_string(), "ZZII");
        assert!((h.terms()[0].basis_coeff().re + 0.25 * 4.0).abs() < 1e-14);
        assert!(h.is_hermitian());
    }

    #[test]
    fn text_round_trip() {
        let h = build_kitaev_hubbard(5, 0.37, -1.1e-3).unwrap();
        let parsed = parse_hamiltonian_file(&h.to_text()).unwrap();
        assert!(parsed.hermitian);
        assert_eq!(parsed.spec.terms(), h.terms());
        assert_eq!(parsed.spec.to_text(), h.to_text());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_hamiltonian_file("# header\n1 0 XZ\n1 0 XQ\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_hamiltonian_file("1 0 XZ\n\n1 0 XZZ\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = parse_hamiltonian_file("1 XZ\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn non_hermitian_flag() {
        let p = parse_hamiltonian_file("1 0.5 XZ\n").unwrap();
        assert!(!p.hermitian);
        // imaginary parts that cancel after merging are fine
        let p = parse_hamiltonian_file("1 0.5 XZ\n1 -0.5 XZ\n").unwrap();
        assert!(p.hermitian);
    }

    #[test]
    fn geometry_parsing() {
        let edges = parse_geometry("# tri\n0 1\n1 2\n0 2\n").unwrap();
        assert_eq!(edges, triangle_edges());
        assert!(parse_geometry("0 0\n").is_err());
        assert!(parse_geometry("0 1\n1 0\n").is_err());
        let hex = three_hexagon_edges();
        assert_eq!(hex.len(), 33);
        assert!(is_connected(16, &hex));
        assert!(!is_connected(4, &[(0, 1), (2, 3)]));
    }

    #[test]
    fn random_real_symmetric_has_even_y() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let h = random_two_local(3, RandomKind::RealSymmetric, &mut rng).unwrap();
        for t in h.terms() {
            assert_eq!(t.codes.iter().filter(|c| **c == BasisCode::Y).count() % 2, 0);
        }
    }

    use rand::SeedableRng;
}
