//! Chamber-level scans of small split buildings `G/B`.
//!
//! A chamber is `u ẇ B` with `u` a product of root elements over
//! `L(w) = {α > 0 : w⁻¹α < 0}` in increasing root order; the coordinates of
//! `u` are free, so the cell of `w` holds `q^{ℓ(w)}` chambers. The Weyl
//! displacement of `θ` at `C = gB` is the Bruhat cell of `g⁻¹ θ g`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::chevalley::{ChevalleyError, ChevalleyGroup, GroupElement, Letter};
use crate::coefficients::Scalars;
use crate::rootsys::{CartanType, RootSystem};
use crate::weyl::{
    class_fingerprint, complement, for_each_element, longest_element, min_double_coset_rep, opposition_involution,
    w0, WeylElement, WeylError, Word,
};

/// Default cap on chambers visited by one scan.
pub const DEFAULT_CHAMBER_BUDGET: u64 = 100_000_000;

const CHUNK: u64 = 1 << 13;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildingError {
    #[error("chamber scans need a finite field")]
    InfiniteField,
    #[error("building has {predicted} chambers, over the budget of {budget}")]
    Budget { predicted: u128, budget: u64 },
    #[error(transparent)]
    Chevalley(#[from] ChevalleyError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error("no built-in diagram table for type {0}")]
    UnknownDiagramTable(String),
    #[error("residue point is not in the rank-one residue: {0}")]
    OutsideResidue(String),
}

/// A Bruhat cell: `w`, the reduced word used for `ẇ`, and `L(w)`.
#[derive(Debug, Clone)]
pub struct Cell {
    pub w: WeylElement,
    pub word: Word,
    pub roots: Vec<usize>,
}

/// The chamber `u ẇ B` with `u = Π x_{roots[k]}(coords[k])`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chamber<E> {
    pub w: WeylElement,
    pub roots: Vec<usize>,
    pub coords: Vec<E>,
}

/// A split building over a finite field, with its cells precomputed.
pub struct Building<F: Scalars> {
    grp: ChevalleyGroup<F>,
    elements: Vec<F::Elem>,
    cells: Vec<Cell>,
    lifts: Vec<GroupElement<F::Elem>>,
    budget: u64,
}

impl<F: Scalars> Building<F> {
    pub fn new(grp: ChevalleyGroup<F>) -> Result<Self, BuildingError> {
        let elements = grp.field().elements().ok_or(BuildingError::InfiniteField)?;
        let rs = grp.root_system();
        let mut ws = Vec::new();
        for_each_element(rs, |w| ws.push(w.clone()))?;
        ws.sort_by_cached_key(|w| (w.length(), w.reduced_word(rs)));
        let cells: Vec<Cell> = ws
            .into_iter()
            .map(|w| {
                let mut roots = w.inverse().inversions();
                roots.sort_unstable();
                Cell { word: w.reduced_word(rs), w, roots }
            })
            .collect();
        let lifts = cells.iter().map(|c| grp.weyl_lift(&c.w)).collect();
        Ok(Building { grp, elements, cells, lifts, budget: DEFAULT_CHAMBER_BUDGET })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn group(&self) -> &ChevalleyGroup<F> {
        &self.grp
    }

    pub fn root_system(&self) -> &RootSystem {
        self.grp.root_system()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn q(&self) -> u64 {
        self.elements.len() as u64
    }

    /// `Σ_w q^{ℓ(w)}`.
    pub fn chamber_count(&self) -> u128 {
        let q = self.q() as u128;
        self.cells.iter().map(|c| q.pow(c.roots.len() as u32)).sum()
    }

    fn cell_size(&self, cell: &Cell) -> u64 {
        self.q().pow(cell.roots.len() as u32)
    }

    fn check_budget(&self) -> Result<u64, BuildingError> {
        let predicted = self.chamber_count();
        if predicted > self.budget as u128 {
            return Err(BuildingError::Budget { predicted, budget: self.budget });
        }
        Ok(predicted as u64)
    }

    /// The chamber with mixed-radix index `index` inside cell `cell`.
    pub fn chamber(&self, cell: usize, index: u64) -> Chamber<F::Elem> {
        let c = &self.cells[cell];
        let q = self.q();
        let mut x = index;
        let coords = (0..c.roots.len())
            .map(|_| {
                let e = self.elements[(x % q) as usize].clone();
                x /= q;
                e
            })
            .collect();
        Chamber { w: c.w.clone(), roots: c.roots.clone(), coords }
    }

    /// Every chamber, cell by cell in (length, word) order.
    pub fn chambers(&self) -> Result<impl Iterator<Item = Chamber<F::Elem>> + '_, BuildingError> {
        self.check_budget()?;
        Ok(self
            .cells
            .iter()
            .enumerate()
            .flat_map(move |(k, c)| (0..self.cell_size(c)).map(move |i| self.chamber(k, i))))
    }

    /// Letters of the representative `u ẇ`.
    pub fn rep_letters(&self, ch: &Chamber<F::Elem>) -> Vec<Letter<F::Elem>> {
        let f = self.grp.field();
        let mut out: Vec<Letter<F::Elem>> = ch
            .roots
            .iter()
            .zip(&ch.coords)
            .filter(|(_, c)| !f.is_zero(c))
            .map(|(&a, c)| Letter::X(a, c.clone()))
            .collect();
        out.extend(ch.w.reduced_word(self.root_system()).0.into_iter().map(Letter::S));
        out
    }

    fn displacement_in_cell(
        &self,
        theta: &[Letter<F::Elem>],
        k: usize,
        coords: &[F::Elem],
    ) -> Result<WeylElement, ChevalleyError> {
        let f = self.grp.field();
        let cell = &self.cells[k];
        // ẇ⁻¹ u⁻¹ θ u, applied to the normal form of ẇ.
        let mut letters: Vec<Letter<F::Elem>> = Vec::with_capacity(2 * cell.roots.len() + 2 * cell.word.len() + theta.len());
        letters.extend(cell.word.0.iter().rev().map(|&i| Letter::SInv(i)));
        for (a, c) in cell.roots.iter().zip(coords).rev() {
            if !f.is_zero(c) {
                letters.push(Letter::X(*a, f.neg(c)));
            }
        }
        letters.extend(theta.iter().cloned());
        for (a, c) in cell.roots.iter().zip(coords) {
            if !f.is_zero(c) {
                letters.push(Letter::X(*a, c.clone()));
            }
        }
        Ok(self.grp.lmul_letters(&letters, self.lifts[k].clone())?.weyl().clone())
    }

    /// `δ(C, θC)`.
    pub fn displacement(&self, theta: &[Letter<F::Elem>], ch: &Chamber<F::Elem>) -> Result<WeylElement, BuildingError> {
        let k = self.cells.iter().position(|c| c.w == ch.w).expect("chamber belongs to this building");
        Ok(self.displacement_in_cell(theta, k, &ch.coords)?)
    }

    fn units(&self) -> Vec<(usize, u64, u64)> {
        let mut units = Vec::new();
        for (k, c) in self.cells.iter().enumerate() {
            let n = self.cell_size(c);
            let mut s = 0;
            while s < n {
                units.push((k, s, (s + CHUNK).min(n)));
                s += CHUNK;
            }
        }
        units
    }

    fn coords_of(&self, cell: &Cell, index: u64) -> Vec<F::Elem> {
        let q = self.q();
        let mut x = index;
        (0..cell.roots.len())
            .map(|_| {
                let e = self.elements[(x % q) as usize].clone();
                x /= q;
                e
            })
            .collect()
    }

    /// The exact multiset `{δ(C, θC)}` over all chambers.
    pub fn displacement_spectrum(&self, theta: &[Letter<F::Elem>]) -> Result<DisplacementReport, BuildingError> {
        let total = self.check_budget()?;
        let counts = self
            .units()
            .into_par_iter()
            .map(|(k, s, e)| -> Result<HashMap<WeylElement, u64>, ChevalleyError> {
                let cell = &self.cells[k];
                let mut local: HashMap<WeylElement, u64> = HashMap::new();
                for i in s..e {
                    let d = self.displacement_in_cell(theta, k, &self.coords_of(cell, i))?;
                    *local.entry(d).or_default() += 1;
                }
                Ok(local)
            })
            .try_reduce(HashMap::new, |mut a, b| {
                for (w, n) in b {
                    *a.entry(w).or_default() += n;
                }
                Ok(a)
            })?;
        let report = DisplacementReport {
            cartan_type: self.root_system().cartan_type(),
            field: self.grp.field().descriptor().to_string(),
            total,
            counts: counts.into_iter().collect(),
        };
        assert_eq!(report.counts.values().sum::<u64>(), total, "scan missed chambers");
        Ok(report)
    }

    /// Exact count of chambers fixed by `θ`, with the first one in scan order.
    pub fn fixed_chambers(&self, theta: &[Letter<F::Elem>]) -> Result<FixedReport<F::Elem>, BuildingError> {
        let total = self.check_budget()?;
        let (count, first) = self
            .units()
            .into_par_iter()
            .map(|(k, s, e)| -> Result<(u64, Option<(usize, u64)>), ChevalleyError> {
                let cell = &self.cells[k];
                let mut n = 0;
                let mut first = None;
                for i in s..e {
                    if self.displacement_in_cell(theta, k, &self.coords_of(cell, i))?.is_identity() {
                        n += 1;
                        first.get_or_insert((k, i));
                    }
                }
                Ok((n, first))
            })
            .try_reduce(
                || (0, None),
                |a, b| {
                    let first = match (a.1, b.1) {
                        (Some(x), Some(y)) => Some(x.min(y)),
                        (x, y) => x.or(y),
                    };
                    Ok((a.0 + b.0, first))
                },
            )?;
        Ok(FixedReport { total, count, sample: first.map(|(k, i)| self.chamber(k, i)) })
    }
}

/// Result of a fixed-chamber scan.
#[derive(Debug, Clone)]
pub struct FixedReport<E> {
    pub total: u64,
    pub count: u64,
    pub sample: Option<Chamber<E>>,
}

/// One row of an exported spectrum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumRow {
    pub word: String,
    pub length: usize,
    pub count: u64,
    pub fingerprint: String,
}

/// `disp(θ)` with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisplacementReport {
    pub cartan_type: CartanType,
    pub field: String,
    pub total: u64,
    pub counts: BTreeMap<WeylElement, u64>,
}

impl DisplacementReport {
    pub fn support(&self) -> impl Iterator<Item = &WeylElement> {
        self.counts.keys()
    }

    pub fn contains(&self, w: &WeylElement) -> bool {
        self.counts.contains_key(w)
    }

    /// The numerical displacement `max ℓ(d)`.
    pub fn max_length(&self) -> usize {
        self.counts.keys().map(|w| w.length()).max().unwrap_or(0)
    }

    /// Merges another report over the same building.
    pub fn merge(&mut self, other: &DisplacementReport) {
        for (w, n) in &other.counts {
            *self.counts.entry(w.clone()).or_default() += n;
        }
        self.total += other.total;
    }

    /// Rows ordered by (length, reduced word).
    pub fn rows(&self, rs: &RootSystem) -> Vec<SpectrumRow> {
        let mut rows: Vec<(usize, Word, SpectrumRow)> = self
            .counts
            .iter()
            .map(|(w, &n)| {
                let word = w.reduced_word(rs);
                let row = SpectrumRow { word: word.to_string(), length: w.length(), count: n, fingerprint: fingerprint_id(rs, w) };
                (w.length(), word, row)
            })
            .collect();
        rows.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        rows.into_iter().map(|r| r.2).collect()
    }

    /// Distinct class fingerprints present.
    pub fn fingerprints(&self, rs: &RootSystem) -> BTreeSet<String> {
        self.counts.keys().map(|w| fingerprint_id(rs, w)).collect()
    }

    pub fn to_tsv(&self, rs: &RootSystem) -> String {
        let mut s = String::from("word\tlength\tcount\tfingerprint\n");
        for r in self.rows(rs) {
            s.push_str(&format!("{}\t{}\t{}\t{}\n", r.word, r.length, r.count, r.fingerprint));
        }
        s
    }
}

/// Compact class-fingerprint id: parity, fixed-space dimension, minimal
/// cyclic-shift length and characteristic polynomial.
pub fn fingerprint_id(rs: &RootSystem, w: &WeylElement) -> String {
    let fp = class_fingerprint(rs, w);
    format!("p{}:f{}:m{}:{}", fp.length_parity, fp.fixed_dim, fp.min_shift_length, fp.charpoly_string())
}

// ---- opposition diagrams -------------------------------------------------

/// Encircled nodes (0-based, sorted).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OppositionDiagram {
    pub cartan_type: CartanType,
    pub encircled: Vec<usize>,
}

impl OppositionDiagram {
    /// Encircled nodes in 1-based Bourbaki labels.
    pub fn nodes(&self) -> Vec<usize> {
        self.encircled.iter().map(|j| j + 1).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.encircled.is_empty()
    }

    /// `{j1,j2,…}` in 1-based labels.
    pub fn label(&self) -> String {
        let inner: Vec<String> = self.nodes().iter().map(|j| j.to_string()).collect();
        format!("{{{}}}", inner.join(","))
    }

    /// Name from the built-in table, if the diagram is listed there.
    pub fn table_name(&self) -> Option<&'static str> {
        admissible_diagrams(self.cartan_type)
            .ok()?
            .into_iter()
            .find(|(_, j)| *j == self.nodes())
            .map(|(n, _)| n)
    }

    /// `Some(listed)` for types with a built-in table, `None` otherwise.
    pub fn admissible(&self) -> Option<bool> {
        admissible_diagrams(self.cartan_type).ok().map(|_| self.table_name().is_some())
    }
}

/// Diagrams of type-preserving automorphisms of large E7 and E8 buildings,
/// with encircled nodes in Bourbaki labels.
pub fn admissible_diagrams(t: CartanType) -> Result<Vec<(&'static str, Vec<usize>)>, BuildingError> {
    match t {
        CartanType::E8 => Ok(vec![
            ("E8;0", vec![]),
            ("E8;1", vec![8]),
            ("E8;2", vec![1, 8]),
            ("E8;4", vec![1, 6, 7, 8]),
            ("E8;8", (1..=8).collect()),
        ]),
        CartanType::E7 => Ok(vec![
            ("E7;0", vec![]),
            ("E7;1", vec![1]),
            ("E7;2", vec![1, 6]),
            ("E7;3", vec![1, 6, 7]),
            ("E7;4", vec![1, 3, 4, 6]),
            ("E7;7", (1..=7).collect()),
        ]),
        other => Err(BuildingError::UnknownDiagramTable(other.to_string())),
    }
}

/// Whether a chamber pair at distance `d` has opposite vertices of types
/// `j` and `σ0(j)`: `d` and `w0` lie in the same `W_K`-double coset, with
/// `K = S ∖ {j, σ0(j)}`.
pub fn opposes_type(rs: &RootSystem, d: &WeylElement, j: usize) -> bool {
    let sigma = opposition_involution(rs);
    let k: Vec<usize> = (0..rs.rank()).filter(|&i| i != j && i != sigma[j]).collect();
    min_double_coset_rep(rs, d, &k, &k) == min_double_coset_rep(rs, &w0(rs), &k, &k)
}

/// Encircles each node whose vertices some displacement in `spectrum` opposes.
pub fn opposition_diagram<'a>(rs: &RootSystem, spectrum: impl IntoIterator<Item = &'a WeylElement>) -> OppositionDiagram {
    let ds: Vec<&WeylElement> = spectrum.into_iter().collect();
    let encircled = (0..rs.rank()).filter(|&j| ds.iter().any(|d| opposes_type(rs, d, j))).collect();
    OppositionDiagram { cartan_type: rs.cartan_type(), encircled }
}

/// For each pair of encircled nodes, whether one displacement opposes both.
pub fn cappedness_pairs(rs: &RootSystem, report: &DisplacementReport, diagram: &OppositionDiagram) -> Vec<(usize, usize, bool)> {
    let mut out = Vec::new();
    for (a, &j1) in diagram.encircled.iter().enumerate() {
        for &j2 in &diagram.encircled[a + 1..] {
            let ok = report.support().any(|d| opposes_type(rs, d, j1) && opposes_type(rs, d, j2));
            out.push((j1 + 1, j2 + 1, ok));
        }
    }
    out
}

// ---- rank-one residues ---------------------------------------------------

/// A chamber of the residue `{B} ∪ {x_β(z) s_β B}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum ResiduePoint<E> {
    Base,
    At(E),
}

/// Letters of the representative: empty for `B`, `x_β(z) s_β(1)` otherwise.
pub fn residue_rep<F: Scalars>(
    grp: &ChevalleyGroup<F>,
    beta: usize,
    p: &ResiduePoint<F::Elem>,
) -> Result<Vec<Letter<F::Elem>>, ChevalleyError> {
    let f = grp.field();
    match p {
        ResiduePoint::Base => Ok(Vec::new()),
        ResiduePoint::At(z) => {
            let mut l = vec![Letter::X(beta, z.clone())];
            l.extend(grp.s_letters(beta, &f.one())?);
            Ok(l)
        }
    }
}

/// `δ(gB, θgB)` for `g` given by letters.
pub fn displacement_of<F: Scalars>(
    grp: &ChevalleyGroup<F>,
    theta: &[Letter<F::Elem>],
    rep: &[Letter<F::Elem>],
) -> Result<WeylElement, ChevalleyError> {
    let mut letters: Vec<Letter<F::Elem>> = rep.iter().rev().map(|l| grp.invert_letter(l.clone())).collect();
    letters.extend(theta.iter().cloned());
    letters.extend(rep.iter().cloned());
    Ok(grp.evaluate(&letters)?.weyl().clone())
}

/// Chambers `C` of the residue of `β` (a positive root) with `θC = C`.
pub fn residue_fixed_points<F: Scalars>(
    grp: &ChevalleyGroup<F>,
    theta: &[Letter<F::Elem>],
    beta: usize,
) -> Result<Vec<ResiduePoint<F::Elem>>, BuildingError> {
    let f = grp.field();
    let els = f.elements().ok_or(BuildingError::InfiniteField)?;
    let mut pts = vec![ResiduePoint::Base];
    pts.extend(els.into_iter().map(ResiduePoint::At));
    let mut fixed = Vec::new();
    for p in pts {
        if displacement_of(grp, theta, &residue_rep(grp, beta, &p)?)?.is_identity() {
            fixed.push(p);
        }
    }
    Ok(fixed)
}

/// `θ′ = x_{-α}(a) x_α(1)` on the residue of a simple root, by the closed
/// Möbius formula.
pub fn residue_image_formula<F: Scalars>(f: &F, a: &F::Elem, p: &ResiduePoint<F::Elem>) -> ResiduePoint<F::Elem> {
    match p {
        ResiduePoint::Base => match f.inv(a) {
            None => ResiduePoint::Base,
            Some(ai) => ResiduePoint::At(ai),
        },
        ResiduePoint::At(z) => {
            let den = f.add(&f.add(&f.mul(a, z), a), &f.one());
            match f.inv(&den) {
                None => ResiduePoint::Base,
                Some(di) => ResiduePoint::At(f.mul(&f.add(z, &f.one()), &di)),
            }
        }
    }
}

/// The same action computed by collection: the normal form of `θ′ g` is
/// read back as a residue chamber.
pub fn residue_image_collection<F: Scalars>(
    grp: &ChevalleyGroup<F>,
    simple: usize,
    a: &F::Elem,
    p: &ResiduePoint<F::Elem>,
) -> Result<ResiduePoint<F::Elem>, BuildingError> {
    let rs = grp.root_system();
    let f = grp.field();
    let alpha = rs.simple(simple);
    let mut letters = vec![Letter::X(rs.neg(alpha), a.clone()), Letter::X(alpha, f.one())];
    if let ResiduePoint::At(z) = p {
        letters.push(Letter::X(alpha, z.clone()));
        letters.push(Letter::S(simple));
    }
    let g = grp.evaluate(&letters)?;
    let stray = g.u().iter().enumerate().any(|(r, c)| r != alpha && !f.is_zero(c));
    if stray {
        return Err(BuildingError::OutsideResidue(format!("{g:?}")));
    }
    if g.weyl().is_identity() {
        Ok(ResiduePoint::Base)
    } else if *g.weyl() == WeylElement::simple(rs, simple) {
        Ok(ResiduePoint::At(g.u()[alpha].clone()))
    } else {
        Err(BuildingError::OutsideResidue(format!("cell of length {}", g.weyl().length())))
    }
}

/// Outcome of the rank-one fixed-chamber criterion for one parameter `a`.
#[derive(Debug, Clone, Serialize)]
pub struct ResidueCriterion {
    pub a: String,
    /// Residue chambers fixed by `θ′`, by the Möbius formula.
    pub fixed_formula: Vec<ResiduePoint<String>>,
    /// The same, by collection.
    pub fixed_collection: Vec<ResiduePoint<String>>,
    /// Whether the two computations give the same image at every point.
    pub implementations_agree: bool,
    /// Roots of `aX² + aX − 1` (empty when `a = 0`).
    pub quadratic_roots: Vec<String>,
    pub fixes_chamber: bool,
    pub witness: Option<ResiduePoint<String>>,
}

/// Runs `θ′ = x_{-α}(a) x_α(1)` over the residue of the simple root `simple`.
pub fn rank_one_fixed_criterion<F: Scalars>(
    grp: &ChevalleyGroup<F>,
    simple: usize,
    a: &F::Elem,
) -> Result<ResidueCriterion, BuildingError> {
    let f = grp.field();
    let els = f.elements().ok_or(BuildingError::InfiniteField)?;
    let render = |p: &ResiduePoint<F::Elem>| match p {
        ResiduePoint::Base => ResiduePoint::Base,
        ResiduePoint::At(z) => ResiduePoint::At(f.render(z)),
    };
    let mut pts = vec![ResiduePoint::Base];
    pts.extend(els.into_iter().map(ResiduePoint::At));
    let mut agree = true;
    let (mut fixed_formula, mut fixed_collection) = (Vec::new(), Vec::new());
    for p in &pts {
        let by_formula = residue_image_formula(f, a, p);
        let by_collection = residue_image_collection(grp, simple, a, p)?;
        agree &= by_formula == by_collection;
        if by_formula == *p {
            fixed_formula.push(render(p));
        }
        if by_collection == *p {
            fixed_collection.push(render(p));
        }
    }
    let quadratic_roots = if f.is_zero(a) {
        Vec::new()
    } else {
        crate::coefficients::quadratic_roots(f, a, a, &f.neg(&f.one()))
            .expect("a is nonzero")
            .iter()
            .map(|r| f.render(r))
            .collect()
    };
    let fixes_chamber = !fixed_formula.is_empty();
    Ok(ResidueCriterion {
        a: f.render(a),
        witness: fixed_formula.first().cloned(),
        fixed_formula,
        fixed_collection,
        implementations_agree: agree,
        quadratic_roots,
        fixes_chamber,
    })
}

// ---- density cosets --------------------------------------------------------

/// `w_Γ = w_{S∖J} w0` for encircled nodes `J` (0-based).
pub fn w_gamma(rs: &RootSystem, j: &[usize]) -> WeylElement {
    longest_element(rs, &complement(rs, j)).multiply(&w0(rs))
}

#[derive(Debug, Clone, Serialize)]
pub struct CosetEntry {
    pub name: String,
    pub word: String,
    pub length: usize,
    #[serde(skip)]
    pub element: WeylElement,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagramCoset {
    pub diagram: String,
    pub encircled: Vec<usize>,
    pub w_gamma: CosetEntry,
}

/// Density-theorem cosets for E7 or E8.
#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub cartan_type: CartanType,
    pub diagrams: Vec<DiagramCoset>,
    /// The corollary's coset list (diagrams forcing a fixed chamber removed).
    pub corollary: Vec<CosetEntry>,
    /// The list obtained by applying `w_Γ = w_{S∖J} w0` to the same diagrams.
    pub formula_corollary: Vec<CosetEntry>,
    /// Entries where the two lists differ.
    pub discrepancies: Vec<String>,
}

fn coset_entry(rs: &RootSystem, name: &str, w: WeylElement) -> CosetEntry {
    CosetEntry { name: name.to_string(), word: w.reduced_word(rs).to_string(), length: w.length(), element: w }
}

pub fn density_cosets(rs: &RootSystem) -> Result<DensityReport, BuildingError> {
    let t = rs.cartan_type();
    let table = admissible_diagrams(t)?;
    let diagrams: Vec<DiagramCoset> = table
        .iter()
        .map(|(name, j)| {
            let j0: Vec<usize> = j.iter().map(|x| x - 1).collect();
            DiagramCoset {
                diagram: name.to_string(),
                encircled: j.clone(),
                w_gamma: coset_entry(rs, &format!("w_{name}"), w_gamma(rs, &j0)),
            }
        })
        .collect();
    // Diagrams 1 and 2 force a fixed chamber, so their cosets are dropped.
    let kept: Vec<&DiagramCoset> = diagrams
        .iter()
        .filter(|d| !d.diagram.ends_with(";1") && !d.diagram.ends_with(";2"))
        .collect();
    let formula_corollary: Vec<CosetEntry> = kept.iter().map(|d| d.w_gamma.clone()).collect();
    let d4 = longest_element(rs, &[1, 2, 3, 4]);
    let id = WeylElement::identity(rs);
    let top = w0(rs);
    let corollary = match t {
        CartanType::E8 => vec![
            coset_entry(rs, "e", id),
            coset_entry(rs, "w_D4 w0", d4.multiply(&top)),
            coset_entry(rs, "w0", top),
        ],
        _ => {
            let s257 = WeylElement::from_word(rs, &Word(vec![1, 4, 6]));
            vec![
                coset_entry(rs, "e", id),
                coset_entry(rs, "w_D4", d4),
                coset_entry(rs, "s2 s5 s7 w0", s257.multiply(&top)),
                coset_entry(rs, "w0", top),
            ]
        }
    };
    let mut discrepancies = Vec::new();
    for c in &corollary {
        if !formula_corollary.iter().any(|d| d.element == c.element) {
            discrepancies.push(format!("{} (length {}) is not w_Γ for any kept diagram", c.name, c.length));
        }
    }
    for d in &formula_corollary {
        if !corollary.iter().any(|c| c.element == d.element) {
            discrepancies.push(format!("{} (length {}) is missing from the corollary list", d.name, d.length));
        }
    }
    Ok(DensityReport { cartan_type: t, diagrams, corollary, formula_corollary, discrepancies })
}
