//! Root systems in the simple-root basis with Bourbaki numbering, coweight
//! pairings, orthogonal subsystems and Chevalley structure constants.
//!
//! Positive roots are ordered by height and then by reverse-lexicographic
//! coordinates, so the simple root `α_{i+1}` has index `i`. Negative roots
//! follow: index `N + k` holds `-root(k)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_RANK: usize = 8;

/// Root coordinates in the simple-root basis, padded with zeros.
pub type RootVec = [i8; MAX_RANK];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootSystemError {
    #[error("unsupported type {0}")]
    Unsupported(String),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("{0:?} is not a root")]
    NotARoot(Vec<i32>),
    #[error("node {0} out of range")]
    BadNode(usize),
    #[error("structure constants are inconsistent: {0}")]
    Inconsistent(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CartanType {
    A(u8),
    D(u8),
    E6,
    E7,
    E8,
    F4,
}

impl CartanType {
    pub fn rank(self) -> usize {
        match self {
            CartanType::A(n) | CartanType::D(n) => n as usize,
            CartanType::E6 => 6,
            CartanType::E7 => 7,
            CartanType::E8 => 8,
            CartanType::F4 => 4,
        }
    }

    pub fn validate(self) -> Result<Self, RootSystemError> {
        let ok = match self {
            CartanType::A(n) => (1..=7).contains(&n),
            CartanType::D(n) => (4..=8).contains(&n),
            _ => true,
        };
        if ok {
            Ok(self)
        } else {
            Err(RootSystemError::Unsupported(self.to_string()))
        }
    }

    /// Order of the Weyl group.
    pub fn weyl_order(self) -> u64 {
        let fact = |n: u64| (1..=n).product::<u64>();
        match self {
            CartanType::A(n) => fact(n as u64 + 1),
            CartanType::D(n) => (1u64 << (n - 1)) * fact(n as u64),
            CartanType::E6 => 51_840,
            CartanType::E7 => 2_903_040,
            CartanType::E8 => 696_729_600,
            CartanType::F4 => 1_152,
        }
    }

    pub fn is_simply_laced(self) -> bool {
        !matches!(self, CartanType::F4)
    }

    /// Symmetrized Gram matrix of the simple roots. Long roots have norm 2 in
    /// simply-laced types; in F4 long roots have norm 4 and short roots norm 2.
    fn gram(self) -> Vec<Vec<i32>> {
        let r = self.rank();
        let mut g = vec![vec![0i32; r]; r];
        let mut bond = |i: usize, j: usize, v: i32| {
            g[i][j] = v;
            g[j][i] = v;
        };
        match self {
            CartanType::A(_) => (1..r).for_each(|i| bond(i - 1, i, -1)),
            CartanType::D(_) => {
                (1..r - 1).for_each(|i| bond(i - 1, i, -1));
                bond(r - 3, r - 1, -1);
            }
            CartanType::E6 | CartanType::E7 | CartanType::E8 => {
                bond(0, 2, -1);
                bond(1, 3, -1);
                (3..r).for_each(|i| bond(i - 1, i, -1));
            }
            CartanType::F4 => {
                bond(0, 1, -2);
                bond(1, 2, -2);
                bond(2, 3, -1);
            }
        }
        let diag: Vec<i32> = match self {
            CartanType::F4 => vec![4, 4, 2, 2],
            _ => vec![2; r],
        };
        for i in 0..r {
            g[i][i] = diag[i];
        }
        g
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A(n) => write!(f, "A{n}"),
            CartanType::D(n) => write!(f, "D{n}"),
            CartanType::E6 => write!(f, "E6"),
            CartanType::E7 => write!(f, "E7"),
            CartanType::E8 => write!(f, "E8"),
            CartanType::F4 => write!(f, "F4"),
        }
    }
}

impl FromStr for CartanType {
    type Err = RootSystemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || RootSystemError::Unsupported(s.to_string());
        let (head, tail) = s.split_at(s.chars().next().map(|c| c.len_utf8()).ok_or_else(bad)?);
        let n: u8 = tail.parse().map_err(|_| bad())?;
        let t = match (head.to_ascii_uppercase().as_str(), n) {
            ("A", n) => CartanType::A(n),
            ("D", n) => CartanType::D(n),
            ("E", 6) => CartanType::E6,
            ("E", 7) => CartanType::E7,
            ("E", 8) => CartanType::E8,
            ("F", 4) => CartanType::F4,
            _ => return Err(bad()),
        };
        t.validate()
    }
}

/// Integer coordinates in the basis of fundamental coweights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoweightVector(pub Vec<i32>);

impl CoweightVector {
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        CoweightVector(v)
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan_type: CartanType,
    rank: usize,
    /// `cartan[i][j] = <α_i^∨, α_j> = 2(α_i, α_j)/(α_i, α_i)`.
    cartan: Vec<Vec<i32>>,
    gram: Vec<Vec<i32>>,
    roots: Vec<RootVec>,
    n_pos: usize,
    index: HashMap<RootVec, usize>,
    norms: Vec<i32>,
    heights: Vec<i32>,
    /// `simple_refl[i][k]` is the index of `s_i(root k)`.
    simple_refl: Vec<Vec<u16>>,
    /// `sum[a * 2N + b]` is the index of `root a + root b`, or `NONE`.
    sum: Vec<u16>,
}

const NONE: u16 = u16::MAX;

impl RootSystem {
    pub fn build(cartan_type: CartanType) -> Result<RootSystem, RootSystemError> {
        let cartan_type = cartan_type.validate()?;
        let rank = cartan_type.rank();
        let gram = cartan_type.gram();
        let cartan: Vec<Vec<i32>> = (0..rank)
            .map(|i| (0..rank).map(|j| 2 * gram[i][j] / gram[i][i]).collect())
            .collect();

        // Close the simple roots under simple reflections.
        let reflect = |v: &RootVec, i: usize| -> RootVec {
            let c: i32 = (0..rank).map(|j| v[j] as i32 * cartan[i][j]).sum();
            let mut out = *v;
            out[i] = (out[i] as i32 - c) as i8;
            out
        };
        let mut seen: std::collections::HashSet<RootVec> = Default::default();
        let mut stack: Vec<RootVec> = (0..rank)
            .map(|i| {
                let mut v = [0i8; MAX_RANK];
                v[i] = 1;
                v
            })
            .collect();
        while let Some(v) = stack.pop() {
            if seen.insert(v) {
                for i in 0..rank {
                    let w = reflect(&v, i);
                    if !seen.contains(&w) {
                        stack.push(w);
                    }
                }
            }
        }
        let mut pos: Vec<RootVec> = seen.iter().filter(|v| v.iter().all(|&c| c >= 0)).copied().collect();
        for v in &seen {
            let nonneg = v.iter().all(|&c| c >= 0);
            let nonpos = v.iter().all(|&c| c <= 0);
            if !(nonneg || nonpos) {
                return Err(RootSystemError::Inconsistent(format!("mixed-sign root {v:?}")));
            }
        }
        let height = |v: &RootVec| v.iter().map(|&c| c as i32).sum::<i32>();
        pos.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| b.cmp(a)));
        let n_pos = pos.len();
        let mut roots = pos.clone();
        roots.extend(pos.iter().map(|v| {
            let mut n = *v;
            n.iter_mut().for_each(|c| *c = -*c);
            n
        }));
        let index: HashMap<RootVec, usize> = roots.iter().enumerate().map(|(k, v)| (*v, k)).collect();
        let inner = |a: &RootVec, b: &RootVec| -> i32 {
            let mut s = 0;
            for i in 0..rank {
                for j in 0..rank {
                    s += a[i] as i32 * gram[i][j] * b[j] as i32;
                }
            }
            s
        };
        let norms: Vec<i32> = roots.iter().map(|v| inner(v, v)).collect();
        let heights: Vec<i32> = roots.iter().map(height).collect();
        let simple_refl: Vec<Vec<u16>> = (0..rank)
            .map(|i| roots.iter().map(|v| index[&reflect(v, i)] as u16).collect())
            .collect();
        let m = roots.len();
        let mut sum = vec![NONE; m * m];
        for a in 0..m {
            for b in 0..m {
                let mut s = roots[a];
                for i in 0..rank {
                    s[i] += roots[b][i];
                }
                if let Some(&k) = index.get(&s) {
                    sum[a * m + b] = k as u16;
                }
            }
        }
        let rs = RootSystem {
            cartan_type,
            rank,
            cartan,
            gram,
            roots,
            n_pos,
            index,
            norms,
            heights,
            simple_refl,
            sum,
        };
        let expected = match cartan_type {
            CartanType::A(n) => n as usize * (n as usize + 1),
            CartanType::D(n) => 2 * n as usize * (n as usize - 1),
            CartanType::E6 => 72,
            CartanType::E7 => 126,
            CartanType::E8 => 240,
            CartanType::F4 => 48,
        };
        if rs.roots.len() != expected {
            return Err(RootSystemError::Inconsistent(format!(
                "{} roots generated, expected {expected}",
                rs.roots.len()
            )));
        }
        Ok(rs)
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn cartan(&self) -> &[Vec<i32>] {
        &self.cartan
    }
    /// Number of positive roots.
    pub fn n_pos(&self) -> usize {
        self.n_pos
    }
    pub fn n_roots(&self) -> usize {
        self.roots.len()
    }
    pub fn root(&self, k: usize) -> &RootVec {
        &self.roots[k]
    }
    /// Coordinates of root `k`, truncated to the rank.
    pub fn coords(&self, k: usize) -> &[i8] {
        &self.roots[k][..self.rank]
    }
    pub fn is_positive(&self, k: usize) -> bool {
        k < self.n_pos
    }
    pub fn height(&self, k: usize) -> i32 {
        self.heights[k]
    }
    pub fn norm(&self, k: usize) -> i32 {
        self.norms[k]
    }
    #[inline]
    pub fn neg(&self, k: usize) -> usize {
        if k < self.n_pos {
            k + self.n_pos
        } else {
            k - self.n_pos
        }
    }
    #[inline]
    pub fn simple_reflect(&self, i: usize, k: usize) -> usize {
        self.simple_refl[i][k] as usize
    }
    pub fn simple_reflection_table(&self, i: usize) -> &[u16] {
        &self.simple_refl[i]
    }
    /// Index of `root a + root b` if it is a root.
    #[inline]
    pub fn sum(&self, a: usize, b: usize) -> Option<usize> {
        let s = self.sum[a * self.roots.len() + b];
        (s != NONE).then_some(s as usize)
    }
    pub fn simple(&self, i: usize) -> usize {
        debug_assert!(i < self.rank);
        i
    }

    pub fn index_of(&self, coords: &[i32]) -> Result<usize, RootSystemError> {
        if coords.len() != self.rank {
            return Err(RootSystemError::RankMismatch { expected: self.rank, got: coords.len() });
        }
        let mut v = [0i8; MAX_RANK];
        for (i, &c) in coords.iter().enumerate() {
            v[i] = i8::try_from(c).map_err(|_| RootSystemError::NotARoot(coords.to_vec()))?;
        }
        self.index.get(&v).copied().ok_or_else(|| RootSystemError::NotARoot(coords.to_vec()))
    }

    /// Root index from a compact digit string like `"22343210"` (positive
    /// roots only) or a comma list like `"-1,0,1"`.
    pub fn parse_root(&self, s: &str) -> Result<usize, RootSystemError> {
        let t = s.trim();
        let coords: Vec<i32> = if t.contains(',') {
            t.split(',')
                .map(|c| c.trim().parse::<i32>())
                .collect::<Result<_, _>>()
                .map_err(|_| RootSystemError::NotARoot(vec![]))?
        } else {
            let (sign, digits) = match t.strip_prefix('-') {
                Some(d) => (-1, d),
                None => (1, t),
            };
            digits
                .chars()
                .map(|c| c.to_digit(10).map(|d| sign * d as i32))
                .collect::<Option<_>>()
                .ok_or_else(|| RootSystemError::NotARoot(vec![]))?
        };
        self.index_of(&coords)
    }

    pub fn render_root(&self, k: usize) -> String {
        let c = self.coords(k);
        if c.iter().all(|&x| (0..10).contains(&x)) {
            c.iter().map(|x| x.to_string()).collect()
        } else if c.iter().all(|&x| (-9..=0).contains(&x)) {
            format!("-{}", c.iter().map(|x| (-x).to_string()).collect::<String>())
        } else {
            c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        }
    }

    /// Symmetric inner product of two roots (scaled so it is integral).
    pub fn inner(&self, a: usize, b: usize) -> i32 {
        let (x, y) = (&self.roots[a], &self.roots[b]);
        let mut s = 0;
        for i in 0..self.rank {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.rank {
                s += x[i] as i32 * self.gram[i][j] * y[j] as i32;
            }
        }
        s
    }

    /// `<a^∨, b> = 2(a, b)/(a, a)`.
    pub fn cartan_pairing(&self, a: usize, b: usize) -> i32 {
        2 * self.inner(a, b) / self.norms[a]
    }

    /// `<λ, α>` for a coweight in the fundamental basis.
    pub fn pairing(&self, lambda: &CoweightVector, alpha: usize) -> Result<i32, RootSystemError> {
        if lambda.0.len() != self.rank {
            return Err(RootSystemError::RankMismatch { expected: self.rank, got: lambda.0.len() });
        }
        Ok(lambda.0.iter().zip(self.coords(alpha)).map(|(l, &a)| l * a as i32).sum())
    }

    /// The coroot `α^∨` as a coweight: coordinates `<α^∨, α_j>`.
    pub fn coroot_coweight(&self, alpha: usize) -> CoweightVector {
        CoweightVector((0..self.rank).map(|j| self.cartan_pairing(alpha, j)).collect())
    }

    /// The coroot `α^∨` in the basis of simple coroots.
    pub fn coroot_coords(&self, alpha: usize) -> Vec<i32> {
        let c = self.coords(alpha);
        (0..self.rank)
            .map(|i| c[i] as i32 * self.gram[i][i] / self.norms[alpha])
            .collect()
    }

    /// Index of the root `s_a(b)`.
    pub fn reflect(&self, a: usize, b: usize) -> usize {
        let c = self.cartan_pairing(a, b);
        let mut v = self.roots[b];
        for i in 0..self.rank {
            v[i] = (v[i] as i32 - c * self.roots[a][i] as i32) as i8;
        }
        self.index[&v]
    }

    /// Index of the highest root.
    pub fn highest_root(&self) -> usize {
        self.n_pos - 1
    }

    /// Highest root of the parabolic subsystem on the connected node set `j`.
    pub fn highest_root_of(&self, j: &[usize]) -> Option<usize> {
        (0..self.n_pos)
            .filter(|&k| self.coords(k).iter().enumerate().all(|(i, &c)| c == 0 || j.contains(&i)))
            .max_by_key(|&k| (self.heights[k], std::cmp::Reverse(k)))
    }

    /// Positive roots supported on the node set `j`.
    pub fn parabolic_positive(&self, j: &[usize]) -> Vec<usize> {
        (0..self.n_pos)
            .filter(|&k| self.coords(k).iter().enumerate().all(|(i, &c)| c == 0 || j.contains(&i)))
            .collect()
    }

    /// Nodes whose simple coroot pairs nontrivially with the highest root.
    pub fn polar_nodes(&self) -> Vec<usize> {
        let phi = self.highest_root();
        (0..self.rank).filter(|&i| self.cartan_pairing(i, phi) != 0).collect()
    }

    /// Roots orthogonal to every root of the parabolic subsystem on `j`.
    pub fn orthogonal_subsystem(&self, j: &[usize]) -> Subsystem {
        let roots: Vec<usize> = (0..self.roots.len())
            .filter(|&b| j.iter().all(|&i| self.inner(i, b) == 0))
            .collect();
        Subsystem::from_roots(self, roots)
    }
}

/// A closed subsystem of a root system, described by ambient root indices.
#[derive(Debug, Clone, Serialize)]
pub struct Subsystem {
    /// Ambient indices of all roots of the subsystem.
    pub roots: Vec<usize>,
    /// Ambient indices of its positive roots (intersection with `Φ⁺`).
    pub positive: Vec<usize>,
    /// Ambient indices of the simple roots of the induced positive system.
    pub simple: Vec<usize>,
    /// `cartan[i][j] = <γ_i^∨, γ_j>` for the simple system.
    pub cartan: Vec<Vec<i32>>,
    /// Type label such as `D4` or `A1+A1`.
    pub type_label: String,
}

impl Subsystem {
    fn from_roots(rs: &RootSystem, roots: Vec<usize>) -> Subsystem {
        let positive: Vec<usize> = roots.iter().copied().filter(|&k| rs.is_positive(k)).collect();
        let simple: Vec<usize> = positive
            .iter()
            .copied()
            .filter(|&g| {
                !positive.iter().any(|&a| {
                    rs.sum(rs.neg(a), g).is_some_and(|d| positive.contains(&d))
                })
            })
            .collect();
        let cartan: Vec<Vec<i32>> =
            simple.iter().map(|&a| simple.iter().map(|&b| rs.cartan_pairing(a, b)).collect()).collect();
        let type_label = classify(&cartan);
        Subsystem { roots, positive, simple, cartan, type_label }
    }
}

/// Names a (possibly reducible) finite-type Cartan matrix, components joined
/// by `+` in descending rank order.
pub fn classify(cartan: &[Vec<i32>]) -> String {
    let n = cartan.len();
    if n == 0 {
        return "empty".into();
    }
    let mut comp = vec![usize::MAX; n];
    let mut labels = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut nodes = vec![start];
        comp[start] = start;
        let mut k = 0;
        while k < nodes.len() {
            let v = nodes[k];
            for u in 0..n {
                if u != v && cartan[v][u] != 0 && comp[u] == usize::MAX {
                    comp[u] = start;
                    nodes.push(u);
                }
            }
            k += 1;
        }
        labels.push(classify_connected(cartan, &nodes));
    }
    labels.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    labels.into_iter().map(|(s, _)| s).collect::<Vec<_>>().join("+")
}

fn classify_connected(cartan: &[Vec<i32>], nodes: &[usize]) -> (String, usize) {
    let m = nodes.len();
    let nbrs = |v: usize| nodes.iter().copied().filter(move |&u| u != v && cartan[v][u] != 0);
    let mut multi = None;
    for &a in nodes {
        for &b in nodes {
            if a < b && cartan[a][b] * cartan[b][a] > 1 {
                multi = Some(cartan[a][b] * cartan[b][a]);
            }
        }
    }
    let name = match multi {
        Some(3) => "G".to_string(),
        Some(_) if m == 4 && nodes.iter().all(|&v| nbrs(v).count() <= 2) => {
            // F4 iff the double bond sits between the two middle nodes.
            let ends: Vec<usize> = nodes.iter().copied().filter(|&v| nbrs(v).count() == 1).collect();
            let end_double = ends.iter().any(|&e| nbrs(e).any(|u| cartan[e][u] * cartan[u][e] == 2));
            if end_double { "B/C" } else { "F" }.to_string()
        }
        Some(_) => "B/C".to_string(),
        None => {
            let branch = nodes.iter().copied().find(|&v| nbrs(v).count() == 3);
            match branch {
                None => "A".to_string(),
                Some(b) => {
                    let mut arms: Vec<usize> = nbrs(b)
                        .map(|first| {
                            let (mut prev, mut cur, mut len) = (b, first, 1);
                            loop {
                                let next: Vec<usize> = nbrs(cur).filter(|&u| u != prev).collect();
                                match next.as_slice() {
                                    [u] => {
                                        prev = cur;
                                        cur = *u;
                                        len += 1;
                                    }
                                    _ => break len,
                                }
                            }
                        })
                        .collect();
                    arms.sort();
                    match arms.as_slice() {
                        [1, 1, _] => "D".to_string(),
                        [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => "E".to_string(),
                        _ => "?".to_string(),
                    }
                }
            }
        }
    };
    (format!("{name}{m}"), m)
}

/// Structure constants `N_{a,b}` for the Chevalley basis, fixed by positive
/// signs on extraspecial pairs, together with commutator coefficients.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    m: usize,
    n: Vec<i8>,
    comm_offsets: Vec<u32>,
    comm_terms: Vec<CommTerm>,
}

/// One factor `x_{i a + j b}(coeff · (-t)^i u^j)` of the commutator
/// `[x_b(u), x_a(t)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CommTerm {
    pub i: u8,
    pub j: u8,
    pub root: u16,
    pub coeff: i32,
}

impl StructureConstants {
    pub fn new(rs: &RootSystem) -> Result<StructureConstants, RootSystemError> {
        let m = rs.n_roots();
        let np = rs.n_pos();
        let mut n = vec![0i8; m * m];

        let string_p = |a: usize, b: usize| -> i32 {
            // Largest p with b - p a a root.
            let mut p = 0;
            let mut cur = b;
            while let Some(next) = rs.sum(rs.neg(a), cur) {
                p += 1;
                cur = next;
            }
            p
        };

        // General lookup that reduces any pair to positive pairs already set.
        fn lookup(rs: &RootSystem, n: &[i8], a: usize, b: usize) -> Option<Rational64> {
            let m = rs.n_roots();
            let c = rs.sum(a, b)?;
            let (pa, pb) = (rs.is_positive(a), rs.is_positive(b));
            let v = if pa && pb {
                Rational64::from_integer(n[a * m + b] as i64)
            } else if !pa && !pb {
                -Rational64::from_integer(n[rs.neg(a) * m + rs.neg(b)] as i64)
            } else if !pa {
                return lookup(rs, n, b, a).map(|v| -v);
            } else {
                // a + b + t = 0 with N_{a,b}/|t|^2 = N_{b,t}/|a|^2 = N_{t,a}/|b|^2.
                let t = rs.neg(c);
                let (na, nb, nt) = (rs.norm(a) as i64, rs.norm(b) as i64, rs.norm(t) as i64);
                if rs.is_positive(c) {
                    // b, t negative.
                    let nbt = -(n[rs.neg(b) * m + rs.neg(t)] as i64);
                    Rational64::new(nt * nbt, na)
                } else {
                    // t, a positive.
                    let nta = n[t * m + a] as i64;
                    Rational64::new(nt * nta, nb)
                }
            };
            Some(v)
        }

        for xi in 0..np {
            if rs.height(xi) < 2 {
                continue;
            }
            let mut special: Vec<(usize, usize)> = (0..np)
                .filter_map(|a| {
                    let b = rs.sum(rs.neg(a), xi)?;
                    (rs.is_positive(b) && a < b).then_some((a, b))
                })
                .collect();
            special.sort();
            let (g, d) = special[0];
            let ngd = string_p(g, d) + 1;
            n[g * m + d] = ngd as i8;
            n[d * m + g] = -ngd as i8;
            for &(a, b) in &special[1..] {
                // Four-root relation on a + b - g - d = 0.
                let nxi = Rational64::from_integer(rs.norm(xi) as i64);
                let mut acc = Rational64::zero();
                if let Some(bg) = rs.sum(b, rs.neg(g)) {
                    let t1 = lookup(rs, &n, b, rs.neg(g)).unwrap();
                    let t2 = lookup(rs, &n, a, rs.neg(d)).ok_or_else(|| {
                        RootSystemError::Inconsistent("a - d must be a root when b - g is".into())
                    })?;
                    acc += t1 * t2 / Rational64::from_integer(rs.norm(bg) as i64);
                }
                if let Some(ag) = rs.sum(a, rs.neg(g)) {
                    let t1 = lookup(rs, &n, rs.neg(g), a).unwrap();
                    let t2 = lookup(rs, &n, b, rs.neg(d)).ok_or_else(|| {
                        RootSystemError::Inconsistent("b - d must be a root when a - g is".into())
                    })?;
                    acc += t1 * t2 / Rational64::from_integer(rs.norm(ag) as i64);
                }
                let val = nxi * acc / Rational64::from_integer(ngd as i64);
                if !val.is_integer() || val.is_zero() {
                    return Err(RootSystemError::Inconsistent(format!("N({a},{b}) = {val}")));
                }
                let v = val.to_integer() as i8;
                n[a * m + b] = v;
                n[b * m + a] = -v;
            }
        }
        // Extend to all pairs.
        let mut full = vec![0i8; m * m];
        for a in 0..m {
            for b in 0..m {
                if let Some(v) = lookup(rs, &n, a, b) {
                    if !v.is_integer() {
                        return Err(RootSystemError::Inconsistent(format!("N({a},{b}) = {v}")));
                    }
                    full[a * m + b] = v.to_integer() as i8;
                }
            }
        }

        let mut sc = StructureConstants { m, n: full, comm_offsets: vec![0], comm_terms: Vec::new() };
        sc.build_commutators(rs)?;
        Ok(sc)
    }

    /// `N_{a,b}`, zero when `a + b` is not a root.
    #[inline]
    pub fn n(&self, a: usize, b: usize) -> i32 {
        self.n[a * self.m + b] as i32
    }

    /// Terms of `[x_b(u), x_a(t)] = Π x_{ia+jb}(C_{ij} (-t)^i u^j)` in the
    /// order of increasing `i + j`.
    #[inline]
    pub fn commutator(&self, a: usize, b: usize) -> &[CommTerm] {
        let k = a * self.m + b;
        &self.comm_terms[self.comm_offsets[k] as usize..self.comm_offsets[k + 1] as usize]
    }

    fn build_commutators(&mut self, rs: &RootSystem) -> Result<(), RootSystemError> {
        let m = self.m;
        let scaled = |i: i64, a: usize, j: i64, b: usize| -> Option<usize> {
            let mut v = [0i32; MAX_RANK];
            for r in 0..rs.rank() {
                v[r] = i as i32 * rs.coords(a)[r] as i32 + j as i32 * rs.coords(b)[r] as i32;
            }
            rs.index_of(&v[..rs.rank()]).ok()
        };
        // M_{r,s,i} = (1/i!) N_{r,s} N_{r,r+s} ... N_{r,(i-1)r+s}
        let big_m = |r: usize, s: usize, i: i64| -> Option<Rational64> {
            let mut prod = Rational64::from_integer(1);
            let mut cur = s;
            for k in 0..i {
                let nv = self.n(r, cur);
                if nv == 0 {
                    return None;
                }
                prod *= Rational64::from_integer(nv as i64);
                prod /= Rational64::from_integer(k + 1);
                if k + 1 < i {
                    cur = rs.sum(r, cur)?;
                }
            }
            Some(prod)
        };
        let mut offsets = vec![0u32];
        let mut all_terms = Vec::new();
        for a in 0..m {
            for b in 0..m {
                if a != b && a != rs.neg(b) && rs.sum(a, b).is_some() {
                    let mut terms = Vec::new();
                    for total in 2..=5i64 {
                        for i in 1..total {
                            let j = total - i;
                            let Some(root) = scaled(i, a, j, b) else { continue };
                            let c = match (i, j) {
                                (_, 1) => big_m(a, b, i),
                                (1, _) => big_m(b, a, j).map(|v| if j % 2 == 0 { v } else { -v }),
                                (3, 2) => big_m(rs.sum(a, b).unwrap(), a, 2).map(|v| v / 3),
                                (2, 3) => big_m(rs.sum(a, b).unwrap(), b, 2).map(|v| v * -2 / 3),
                                _ => None,
                            };
                            let c = c.ok_or_else(|| {
                                RootSystemError::Inconsistent(format!("no commutator coefficient for ({i},{j})"))
                            })?;
                            if !c.is_integer() {
                                return Err(RootSystemError::Inconsistent(format!("C{i}{j} = {c}")));
                            }
                            terms.push(CommTerm {
                                i: i as u8,
                                j: j as u8,
                                root: root as u16,
                                coeff: c.to_integer().to_i32().unwrap(),
                            });
                        }
                    }
                    all_terms.extend(terms);
                }
                offsets.push(all_terms.len() as u32);
            }
        }
        self.comm_offsets = offsets;
        self.comm_terms = all_terms;
        Ok(())
    }

    /// Checks `|N_{a,b}| = p + 1`, antisymmetry and the Jacobi identity on
    /// every unordered triple of Chevalley basis vectors.
    pub fn verify(&self, rs: &RootSystem) -> Result<(), RootSystemError> {
        let m = self.m;
        for a in 0..m {
            for b in 0..m {
                let v = self.n(a, b);
                if v != -self.n(b, a) {
                    return Err(RootSystemError::Inconsistent(format!("antisymmetry at ({a},{b})")));
                }
                if rs.sum(a, b).is_some() {
                    let mut p = 0;
                    let mut cur = b;
                    while let Some(next) = rs.sum(rs.neg(a), cur) {
                        p += 1;
                        cur = next;
                    }
                    if v.abs() != p + 1 {
                        return Err(RootSystemError::Inconsistent(format!("|N({a},{b})| = {v}, p = {p}")));
                    }
                } else if v != 0 {
                    return Err(RootSystemError::Inconsistent(format!("N({a},{b}) set on a non-root sum")));
                }
            }
        }
        let alg = LieAlgebra::new(rs, self);
        let dim = alg.dim();
        let basis = |k: usize| vec![(k, 1i64)];
        for x in 0..dim {
            for y in x + 1..dim {
                let xy = alg.bracket(&basis(x), &basis(y));
                for z in y + 1..dim {
                    let mut total = alg.bracket(&basis(z), &xy);
                    let yz = alg.bracket(&basis(y), &basis(z));
                    total.extend(alg.bracket(&basis(x), &yz));
                    let zx = alg.bracket(&basis(z), &basis(x));
                    total.extend(alg.bracket(&basis(y), &zx));
                    if !is_zero_sparse(total) {
                        return Err(RootSystemError::Inconsistent(format!("Jacobi fails on ({x},{y},{z})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Pairs `(a, b, N_{a,b})` with `a < b` and `a + b` a root.
    pub fn nonzero_pairs(&self) -> Vec<(usize, usize, i32)> {
        let mut out = Vec::new();
        for a in 0..self.m {
            for b in a + 1..self.m {
                let v = self.n(a, b);
                if v != 0 {
                    out.push((a, b, v));
                }
            }
        }
        out
    }
}

fn is_zero_sparse(mut v: Vec<(usize, i64)>) -> bool {
    v.sort_unstable_by_key(|e| e.0);
    let mut k = 0;
    while k < v.len() {
        let mut s = 0;
        let key = v[k].0;
        while k < v.len() && v[k].0 == key {
            s += v[k].1;
            k += 1;
        }
        if s != 0 {
            return false;
        }
    }
    true
}

/// The Chevalley basis `{e_a} ∪ {h_i}` over the integers: root vectors take
/// indices `0..2N`, the simple coroots `h_i` take `2N + i`.
pub struct LieAlgebra<'a> {
    rs: &'a RootSystem,
    sc: &'a StructureConstants,
}

impl<'a> LieAlgebra<'a> {
    pub fn new(rs: &'a RootSystem, sc: &'a StructureConstants) -> Self {
        LieAlgebra { rs, sc }
    }

    pub fn dim(&self) -> usize {
        self.rs.n_roots() + self.rs.rank()
    }

    /// Bracket of two basis vectors as a sparse integer vector.
    pub fn bracket_basis(&self, x: usize, y: usize) -> Vec<(usize, i64)> {
        let rs = self.rs;
        let m = rs.n_roots();
        match (x < m, y < m) {
            (true, true) => {
                if y == rs.neg(x) {
                    rs.coroot_coords(x)
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| *c != 0)
                        .map(|(i, c)| (m + i, c as i64))
                        .collect()
                } else if let Some(s) = rs.sum(x, y) {
                    vec![(s, self.sc.n(x, y) as i64)]
                } else {
                    Vec::new()
                }
            }
            (false, true) => {
                let c = rs.cartan_pairing(x - m, y);
                if c == 0 {
                    Vec::new()
                } else {
                    vec![(y, c as i64)]
                }
            }
            (true, false) => {
                let c = rs.cartan_pairing(y - m, x);
                if c == 0 {
                    Vec::new()
                } else {
                    vec![(x, -c as i64)]
                }
            }
            (false, false) => Vec::new(),
        }
    }

    pub fn bracket(&self, x: &[(usize, i64)], y: &[(usize, i64)]) -> Vec<(usize, i64)> {
        let mut out = Vec::new();
        for &(i, a) in x {
            for &(j, b) in y {
                for (k, c) in self.bracket_basis(i, j) {
                    out.push((k, a * b * c));
                }
            }
        }
        out
    }
}

/// JSON form of a root system and its constants, for regression files.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RootSystemData {
    pub cartan_type: String,
    pub rank: usize,
    pub cartan: Vec<Vec<i32>>,
    pub positive_roots: Vec<Vec<i8>>,
    pub heights: Vec<i32>,
    /// `(a, b, N_{a,b})` over root indices with `a < b`.
    pub structure_constants: Vec<(usize, usize, i32)>,
}

impl RootSystemData {
    pub fn new(rs: &RootSystem, sc: &StructureConstants) -> Self {
        RootSystemData {
            cartan_type: rs.cartan_type.to_string(),
            rank: rs.rank,
            cartan: rs.cartan.clone(),
            positive_roots: (0..rs.n_pos).map(|k| rs.coords(k).to_vec()).collect(),
            heights: rs.heights[..rs.n_pos].to_vec(),
            structure_constants: sc.nonzero_pairs(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_types() -> Vec<CartanType> {
        let mut v: Vec<CartanType> = (1..=7).map(CartanType::A).collect();
        v.extend((4..=8).map(CartanType::D));
        v.extend([CartanType::E6, CartanType::E7, CartanType::E8, CartanType::F4]);
        v
    }

    #[test]
    fn root_counts_and_sign_coherence() {
        for t in all_types() {
            let rs = RootSystem::build(t).unwrap();
            for k in 0..rs.n_roots() {
                let c = rs.coords(k);
                assert!(c.iter().all(|&x| x >= 0) || c.iter().all(|&x| x <= 0));
                for a in 0..rs.n_roots() {
                    assert_eq!(rs.reflect(a, rs.reflect(a, k)), k);
                }
            }
            for i in 0..rs.rank() {
                assert_eq!(rs.coords(i).iter().filter(|&&x| x != 0).count(), 1);
                assert_eq!(rs.coords(i)[i], 1);
            }
        }
    }

    #[test]
    fn e8_highest_root_and_pairings() {
        let rs = RootSystem::build(CartanType::E8).unwrap();
        let phi = rs.highest_root();
        assert_eq!(rs.coords(phi), &[2, 3, 4, 6, 5, 4, 3, 2]);
        assert_eq!(rs.n_pos(), 120);
        let w8 = CoweightVector::fundamental(8, 7);
        assert_eq!(rs.pairing(&w8, phi).unwrap(), 2);
        // The coroot of φ is the coweight ω8.
        assert_eq!(rs.coroot_coweight(phi), w8);
        assert_eq!(rs.pairing(&rs.coroot_coweight(phi), 7).unwrap(), 1);
        for i in 0..8 {
            assert_eq!(rs.pairing(&CoweightVector::fundamental(8, i), i).unwrap(), 1);
        }
        assert!(rs.pairing(&CoweightVector(vec![1; 3]), 0).is_err());
    }

    #[test]
    fn a2_positive_roots() {
        let rs = RootSystem::build(CartanType::A(2)).unwrap();
        let pos: Vec<&[i8]> = (0..rs.n_pos()).map(|k| rs.coords(k)).collect();
        assert_eq!(pos, vec![&[1, 0][..], &[0, 1], &[1, 1]]);
    }

    #[test]
    fn polar_nodes() {
        let e8 = RootSystem::build(CartanType::E8).unwrap();
        assert_eq!(e8.polar_nodes(), vec![7]);
        let a2 = RootSystem::build(CartanType::A(2)).unwrap();
        assert_eq!(a2.polar_nodes(), vec![0, 1]);
        let d4 = RootSystem::build(CartanType::D(4)).unwrap();
        assert_eq!(d4.polar_nodes(), vec![1]);
        let f4 = RootSystem::build(CartanType::F4).unwrap();
        assert_eq!(f4.polar_nodes(), vec![0]);
    }

    #[test]
    fn e8_orthogonal_d4() {
        let rs = RootSystem::build(CartanType::E8).unwrap();
        let psi = rs.orthogonal_subsystem(&[1, 2, 3, 4]);
        assert_eq!(psi.positive.len(), 12);
        assert_eq!(psi.type_label, "D4");
        let mut simple: Vec<String> = psi.simple.iter().map(|&k| rs.render_root(k)).collect();
        simple.sort();
        let mut expected = vec!["22343210", "00000001", "01122210", "00000010"];
        expected.sort();
        assert_eq!(simple, expected);
        let full = rs.orthogonal_subsystem(&[]);
        assert_eq!(full.roots.len(), 240);
        assert_eq!(full.type_label, "E8");
    }

    #[test]
    fn classify_examples() {
        for (t, label) in [
            (CartanType::A(5), "A5"),
            (CartanType::D(6), "D6"),
            (CartanType::E7, "E7"),
            (CartanType::F4, "F4"),
        ] {
            let rs = RootSystem::build(t).unwrap();
            assert_eq!(classify(rs.cartan()), label);
        }
        let e7 = RootSystem::build(CartanType::E7).unwrap();
        assert_eq!(e7.orthogonal_subsystem(&[1, 2, 3, 4]).type_label, "A1+A1+A1");
    }

    #[test]
    fn structure_constants_small_types() {
        let rs = RootSystem::build(CartanType::A(2)).unwrap();
        let sc = StructureConstants::new(&rs).unwrap();
        assert_eq!(sc.n(0, 1).abs(), 1);
        assert_eq!(sc.n(0, 1), -sc.n(1, 0));
        sc.verify(&rs).unwrap();
        let f4 = RootSystem::build(CartanType::F4).unwrap();
        let sc = StructureConstants::new(&f4).unwrap();
        sc.verify(&f4).unwrap();
        let vals: std::collections::BTreeSet<i32> =
            sc.nonzero_pairs().iter().map(|p| p.2.abs()).collect();
        assert_eq!(vals.into_iter().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn jacobi_every_type() {
        for t in all_types() {
            let rs = RootSystem::build(t).unwrap();
            let sc = StructureConstants::new(&rs).unwrap();
            sc.verify(&rs).unwrap_or_else(|e| panic!("{t}: {e}"));
            if t.is_simply_laced() {
                assert!(sc.nonzero_pairs().iter().all(|p| p.2.abs() == 1));
            }
        }
    }

    #[test]
    fn parse_types() {
        assert_eq!("E8".parse::<CartanType>().unwrap(), CartanType::E8);
        assert_eq!("a5".parse::<CartanType>().unwrap(), CartanType::A(5));
        assert!("D3".parse::<CartanType>().is_err());
        assert!("G2".parse::<CartanType>().is_err());
        assert!("A9".parse::<CartanType>().is_err());
    }
}
