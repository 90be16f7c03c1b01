//! Variational equation along a collision branch and its normal block.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, ParseError, Result};
use crate::exactfield::{Chart, CycNum, RatFn};
use crate::mechanics::{maximized_h, CollisionBranch};
use crate::symexpr::Sym;

/// Square matrix of rational functions, X' = A·X in the given chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSystem {
    pub n: usize,
    /// Row-major entries.
    pub entries: Vec<RatFn>,
    pub ordering: Vec<String>,
    pub chart: Chart,
}

pub const T_ORDERING: [&str; 8] = ["x1", "x2", "x3", "x4", "p1", "p2", "p3", "p4"];
pub const BLOCK_ORDERING: [&str; 8] = ["x1", "x3", "p1", "p3", "x2", "x4", "p2", "p4"];

impl VarSystem {
    pub fn new(n: usize, entries: Vec<RatFn>, ordering: Vec<String>, chart: Chart) -> Result<Self> {
        if entries.len() != n * n || ordering.len() != n {
            return Err(Error::InvalidArgument(format!(
                "{n}×{n} system needs {} entries and {n} labels",
                n * n
            )));
        }
        Ok(VarSystem {
            n,
            entries,
            ordering,
            chart,
        })
    }

    pub fn zeros(n: usize, chart: Chart) -> Self {
        VarSystem {
            n,
            entries: vec![RatFn::zero(); n * n],
            ordering: (1..=n).map(|k| format!("c{k}")).collect(),
            chart,
        }
    }

    pub fn get(&self, r: usize, c: usize) -> &RatFn {
        &self.entries[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: RatFn) {
        self.entries[r * self.n + c] = v;
    }

    pub fn trace(&self) -> RatFn {
        (0..self.n).fold(RatFn::zero(), |acc, k| &acc + self.get(k, k))
    }

    /// Every entry multiplied by `f`.
    pub fn scaled(&self, f: &RatFn) -> Self {
        let mut s = self.clone();
        for e in s.entries.iter_mut() {
            *e = &*e * f;
        }
        s
    }

    /// Reorder coordinates: new coordinate k is old coordinate `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut out = VarSystem::zeros(n, self.chart);
        for r in 0..n {
            for c in 0..n {
                out.set(r, c, self.get(perm[r], perm[c]).clone());
            }
        }
        out.ordering = perm.iter().map(|&k| self.ordering[k].clone()).collect();
        out
    }

    pub fn block(&self, r0: usize, c0: usize, m: usize) -> Self {
        let mut out = VarSystem::zeros(m, self.chart);
        for r in 0..m {
            for c in 0..m {
                out.set(r, c, self.get(r0 + r, c0 + c).clone());
            }
        }
        out.ordering = self.ordering[c0..c0 + m].to_vec();
        out
    }

    pub fn mat_mul(&self, o: &VarSystem) -> VarSystem {
        let n = self.n;
        let mut out = VarSystem::zeros(n, self.chart);
        for r in 0..n {
            for c in 0..n {
                let mut acc = RatFn::zero();
                for k in 0..n {
                    let a = self.get(r, k);
                    let b = o.get(k, c);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(r, c, acc);
            }
        }
        out.ordering = self.ordering.clone();
        out
    }

    pub fn transpose(&self) -> VarSystem {
        let mut out = self.clone();
        for r in 0..self.n {
            for c in 0..self.n {
                out.set(r, c, self.get(c, r).clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Chart variable values where some entry has a pole are the roots of
    /// this polynomial (lcm of the denominators).
    pub fn pole_polynomial(&self) -> crate::exactfield::Poly {
        self.entries.iter().fold(crate::exactfield::Poly::one(), |acc, e| {
            crate::exactfield::Poly::lcm(&acc, e.den())
        })
    }

    /// Text form: header, then every entry row-major in RatFn text.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "varsystem v1");
        let _ = writeln!(s, "n: {}", self.n);
        let _ = writeln!(s, "ordering: {}", self.ordering.join(","));
        let _ = writeln!(s, "chart: {}", self.chart);
        for r in 0..self.n {
            for c in 0..self.n {
                let _ = writeln!(s, "e {} {}: {}", r + 1, c + 1, self.get(r, c).to_text());
            }
        }
        s
    }
}

fn header<'a>(line: Option<(usize, &'a str)>, key: &str) -> std::result::Result<(usize, &'a str), ParseError> {
    let (no, l) = line.ok_or_else(|| ParseError::new(0, 1, format!("missing `{key}` line")))?;
    let rest = l
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix(':'))
        .ok_or_else(|| ParseError::new(no, 1, format!("expected `{key}:`")))?;
    Ok((no, rest.trim()))
}

const MAX_DIM: usize = 16;

impl FromStr for VarSystem {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim_end()))
            .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, "varsystem v1")) => {}
            Some((no, _)) => return Err(ParseError::new(no, 1, "expected `varsystem v1`")),
            None => return Err(ParseError::new(1, 1, "empty input")),
        }
        let (no, n) = header(lines.next(), "n")?;
        let n: usize = n
            .parse()
            .map_err(|_| ParseError::new(no, 4, "dimension must be a positive integer"))?;
        if n == 0 || n > MAX_DIM {
            return Err(ParseError::new(no, 4, format!("dimension must be in 1..={MAX_DIM}")));
        }
        let (no, ord) = header(lines.next(), "ordering")?;
        let ordering: Vec<String> = ord.split(',').map(|t| t.trim().to_string()).collect();
        if ordering.len() != n || ordering.iter().any(|t| t.is_empty()) {
            return Err(ParseError::new(no, 11, format!("expected {n} coordinate labels")));
        }
        let (no, ch) = header(lines.next(), "chart")?;
        let chart = Chart::from_name(ch).ok_or_else(|| ParseError::new(no, 8, format!("unknown chart `{ch}`")))?;
        let mut entries = vec![None; n * n];
        for (no, l) in lines {
            let rest = l
                .strip_prefix("e ")
                .ok_or_else(|| ParseError::new(no, 1, "expected entry line `e r c: …`"))?;
            let (idx, val) = rest
                .split_once(':')
                .ok_or_else(|| ParseError::new(no, 3, "missing `:`"))?;
            let mut it = idx.split_whitespace();
            let parse_idx = |t: Option<&str>| -> std::result::Result<usize, ParseError> {
                let k: usize = t
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| ParseError::new(no, 3, "bad entry index"))?;
                if k == 0 || k > n {
                    return Err(ParseError::new(no, 3, format!("index {k} out of range 1..={n}")));
                }
                Ok(k - 1)
            };
            let r = parse_idx(it.next())?;
            let c = parse_idx(it.next())?;
            if it.next().is_some() {
                return Err(ParseError::new(no, 3, "too many indices"));
            }
            let offset = l.chars().count() - val.chars().count();
            let f: RatFn = val.parse().map_err(|e: ParseError| e.at_line(no, offset))?;
            if entries[r * n + c].replace(f).is_some() {
                return Err(ParseError::new(
                    no,
                    1,
                    format!("duplicate entry ({}, {})", r + 1, c + 1),
                ));
            }
        }
        let entries: Vec<RatFn> = entries
            .into_iter()
            .enumerate()
            .map(|(k, e)| {
                e.ok_or_else(|| ParseError::new(0, 1, format!("missing entry ({}, {})", k / n + 1, k % n + 1)))
            })
            .collect::<std::result::Result<_, _>>()?;
        Ok(VarSystem {
            n,
            entries,
            ordering,
            chart,
        })
    }
}

/// J = [[0, I], [−I, 0]] in dimension 2m.
pub fn poisson_j(m: usize, chart: Chart) -> VarSystem {
    let mut j = VarSystem::zeros(2 * m, chart);
    for k in 0..m {
        j.set(k, m + k, RatFn::one());
        j.set(m + k, k, RatFn::from_int(-1));
    }
    j.ordering = T_ORDERING[..2 * m.min(4)].iter().map(|s| s.to_string()).collect();
    if j.ordering.len() != 2 * m {
        j.ordering = (1..=2 * m).map(|k| format!("c{k}")).collect();
    }
    j
}

/// t-time A = J·D²H along the branch, ordering (x1..x4, p1..p4), w-chart.
pub fn variational_matrix(branch: &CollisionBranch) -> Result<VarSystem> {
    let h = maximized_h();
    let pt = branch.point();
    let mut hess = VarSystem::zeros(8, Chart::W);
    for (i, &a) in Sym::PHASE.iter().enumerate() {
        let da = h.differentiate(a)?;
        for (j, &b) in Sym::PHASE.iter().enumerate().skip(i) {
            let v = da.differentiate(b)?.eval_at(&pt)?;
            hess.set(i, j, v.clone());
            hess.set(j, i, v);
        }
    }
    let mut a = poisson_j(4, Chart::W).mat_mul(&hess);
    a.ordering = T_ORDERING.iter().map(|s| s.to_string()).collect();
    Ok(a)
}

/// AᵀJ + JA = 0.
pub fn is_infinitesimally_symplectic(a: &VarSystem) -> bool {
    if a.n % 2 != 0 {
        return false;
    }
    let j = poisson_j(a.n / 2, a.chart);
    let lhs = a.transpose().mat_mul(&j);
    let rhs = j.mat_mul(a);
    lhs.entries.iter().zip(&rhs.entries).all(|(x, y)| (x + y).is_zero())
}

/// Permutation taking (x1..x4, p1..p4) to (x1, x3, p1, p3, x2, x4, p2, p4).
pub const BLOCK_PERM: [usize; 8] = [0, 2, 4, 6, 1, 3, 5, 7];

/// x1-time system (1/x3)·A in the block ordering.
pub fn x1_time_block_system(branch: &CollisionBranch) -> Result<VarSystem> {
    let a = variational_matrix(branch)?;
    Ok(a.permuted(&BLOCK_PERM).scaled(&branch.x3().inv()?))
}

/// Lower-right 4×4 block of an 8×8 system in block ordering, after checking
/// the lower-left block vanishes.
pub fn extract_normal_block(sys: &VarSystem) -> Result<VarSystem> {
    if sys.n != 8 {
        return Err(Error::InvalidArgument(format!("expected 8×8, got {}×{}", sys.n, sys.n)));
    }
    let ll = sys.block(4, 0, 4);
    if let Some(k) = ll.entries.iter().position(|e| !e.is_zero()) {
        return Err(Error::InvarianceViolation(format!(
            "lower-left entry ({}, {}) = {:?}",
            k / 4 + 5,
            k % 4 + 1,
            ll.entries[k]
        )));
    }
    Ok(sys.block(4, 4, 4))
}

/// Coordinate k of the reference corresponds to sign[k]·coordinate perm[k]
/// of the derived system: R[k][l] = s_k·s_l·D[perm k][perm l].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPerm {
    pub perm: Vec<usize>,
    pub sign: Vec<i8>,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm {
            perm: (0..n).collect(),
            sign: vec![1; n],
        }
    }

    /// A signed permutation and its negative act identically; keep the one
    /// whose first sign is positive.
    pub fn normalized(mut self) -> Self {
        if self.sign.first() == Some(&-1) {
            self.sign.iter_mut().for_each(|s| *s = -*s);
        }
        self
    }

    /// Labels like `(p4, x4, x2, −p2)` relative to the derived ordering.
    pub fn describe(&self, labels: &[String]) -> String {
        let parts: Vec<String> = self
            .perm
            .iter()
            .zip(&self.sign)
            .map(|(&p, &s)| format!("{}{}", if s < 0 { "-" } else { "" }, labels[p]))
            .collect();
        format!("({})", parts.join(", "))
    }
}

#[derive(Clone, Debug)]
pub struct MatchReport {
    pub found: Option<SignedPerm>,
    /// Best candidate and its number of mismatching entries.
    pub best: SignedPerm,
    pub mismatches: usize,
    pub searched: usize,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..used.len() {
            if !used[k] {
                used[k] = true;
                cur.push(k);
                rec(cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Exhaustive search over all n!·2ⁿ signed permutations (384 for n = 4).
pub fn match_up_to_signed_permutation(derived: &VarSystem, reference: &VarSystem) -> Result<MatchReport> {
    if derived.n != reference.n {
        return Err(Error::InvalidArgument("dimension mismatch".into()));
    }
    if derived.chart != reference.chart {
        return Err(Error::ChartMismatch(derived.chart.name(), reference.chart.name()));
    }
    let n = derived.n;
    let neg: Vec<RatFn> = derived.entries.iter().map(|e| -e).collect();
    let mut best: Option<(usize, SignedPerm)> = None;
    let mut searched = 0;
    for perm in permutations(n) {
        for mask in 0..(1u32 << n) {
            searched += 1;
            let sign: Vec<i8> = (0..n).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect();
            let mut bad = 0;
            for r in 0..n {
                for c in 0..n {
                    let idx = perm[r] * n + perm[c];
                    let v = if sign[r] * sign[c] < 0 {
                        &neg[idx]
                    } else {
                        &derived.entries[idx]
                    };
                    if v != reference.get(r, c) {
                        bad += 1;
                    }
                }
            }
            let sp = SignedPerm {
                perm: perm.clone(),
                sign,
            }
            .normalized();
            if bad == 0 {
                return Ok(MatchReport {
                    found: Some(sp.clone()),
                    best: sp,
                    mismatches: 0,
                    searched,
                });
            }
            if best.as_ref().is_none_or(|(b, _)| bad < *b) {
                best = Some((bad, sp));
            }
        }
    }
    let (mismatches, best) = best.expect("at least one permutation");
    Ok(MatchReport {
        found: None,
        best,
        mismatches,
        searched,
    })
}

/// The displayed normal block as a template in p3(w), x1 = w²:
///
/// ```text
/// [ 0            0        0              1/(√2p3) ]
/// [ −1/(√2p3²)   0        −1/(√2x1³p3)   0        ]
/// [ 0            1/(√2p3) 0              0        ]
/// [ −1/(√2x1³p3) 0        3/(√2x1⁴)      0        ]
/// ```
pub fn displayed_a3(p3: &RatFn) -> Result<VarSystem> {
    let s2 = RatFn::constant(CycNum::sqrt2());
    let x1 = RatFn::var().pow(2);
    let f = (&s2 * p3).inv()?;
    let x13 = x1.pow(3);
    let e12 = -&(&s2 * &p3.pow(2)).inv()?;
    let e14 = -&(&(&s2 * &x13) * p3).inv()?;
    let e34 = (&s2 * &x1.pow(4)).inv()?.scale(&CycNum::from_int(3));
    let z = RatFn::zero();
    let entries = vec![
        z.clone(),
        z.clone(),
        z.clone(),
        f.clone(),
        e12,
        z.clone(),
        e14.clone(),
        z.clone(),
        z.clone(),
        f,
        z.clone(),
        z.clone(),
        e14,
        z.clone(),
        e34,
        z,
    ];
    VarSystem::new(
        4,
        entries,
        ["X1", "X2", "X3", "X4"].iter().map(|s| s.to_string()).collect(),
        Chart::W,
    )
}

/// p3 = (x1 − i)/√x1 as printed, i.e. β = 1.
pub fn literal_p3() -> RatFn {
    CollisionBranch::printed().p3()
}

/// Express `e` as c·b for a single basis element b; returns (index, c).
pub fn span_coefficient(e: &RatFn, basis: &[RatFn]) -> Option<(usize, CycNum)> {
    if e.is_zero() {
        return Some((usize::MAX, CycNum::zero()));
    }
    basis
        .iter()
        .enumerate()
        .find_map(|(k, b)| e.div(b).ok().and_then(|q| q.as_constant()).map(|c| (k, c)))
}

/// The shape basis {1/(√2p3), 1/(√2p3²), 1/(√2x1³p3), 1/(√2x1⁴)}.
pub fn a3_shape_basis(p3: &RatFn) -> Result<Vec<RatFn>> {
    let s2 = RatFn::constant(CycNum::sqrt2());
    let x1 = RatFn::var().pow(2);
    Ok(vec![
        (&s2 * p3).inv()?,
        (&s2 * &p3.pow(2)).inv()?,
        (&(&s2 * &x1.pow(3)) * p3).inv()?,
        (&s2 * &x1.pow(4)).inv()?,
    ])
}
