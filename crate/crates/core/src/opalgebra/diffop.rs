use std::fmt::{self, Write as _};
use std::str::FromStr;

use crate::error::{Error, ParseError, Result};
use crate::exactfield::{Chart, CycNum, Poly, RatFn};

/// Σ a_k·D^k with coefficients in the chart's rational function field.
///
/// Canonical: no trailing zero coefficients; the zero operator has none.
#[derive(Clone, PartialEq, Eq)]
pub struct DiffOp {
    chart: Chart,
    coeffs: Vec<RatFn>,
}

fn check_chart(a: &DiffOp, b: &DiffOp) -> Result<()> {
    if a.chart != b.chart {
        return Err(Error::ChartMismatch(a.chart.name(), b.chart.name()));
    }
    Ok(())
}

impl DiffOp {
    pub fn new(chart: Chart, mut coeffs: Vec<RatFn>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DiffOp { chart, coeffs }
    }

    pub fn zero(chart: Chart) -> Self {
        DiffOp::new(chart, Vec::new())
    }

    pub fn one(chart: Chart) -> Self {
        Self::scalar(chart, RatFn::one())
    }

    pub fn scalar(chart: Chart, a: RatFn) -> Self {
        DiffOp::new(chart, vec![a])
    }

    /// The derivation D itself.
    pub fn d(chart: Chart) -> Self {
        DiffOp::new(chart, vec![RatFn::zero(), RatFn::one()])
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn coeffs(&self) -> &[RatFn] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> RatFn {
        self.coeffs.get(k).cloned().unwrap_or_else(RatFn::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order; `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&RatFn> {
        self.coeffs.last()
    }

    pub fn add(&self, o: &DiffOp) -> Result<DiffOp> {
        check_chart(self, o)?;
        let n = self.coeffs.len().max(o.coeffs.len());
        Ok(DiffOp::new(
            self.chart,
            (0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect(),
        ))
    }

    pub fn sub(&self, o: &DiffOp) -> Result<DiffOp> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> DiffOp {
        DiffOp::new(self.chart, self.coeffs.iter().map(|c| -c).collect())
    }

    /// Left multiplication by a function.
    pub fn scale_left(&self, a: &RatFn) -> DiffOp {
        DiffOp::new(self.chart, self.coeffs.iter().map(|c| a * c).collect())
    }

    /// D·L = Σ (δa_k·D^k + a_k·D^{k+1}).
    pub fn d_times(&self) -> DiffOp {
        let n = self.coeffs.len();
        let mut out = vec![RatFn::zero(); n + 1];
        for (k, a) in self.coeffs.iter().enumerate() {
            out[k] = &out[k] + &self.chart.derive(a);
            out[k + 1] = &out[k + 1] + a;
        }
        DiffOp::new(self.chart, out)
    }

    /// Ore product self·o.
    pub fn mul(&self, o: &DiffOp) -> Result<DiffOp> {
        check_chart(self, o)?;
        let mut acc = DiffOp::zero(self.chart);
        let mut dk = o.clone();
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                dk = dk.d_times();
            }
            if !a.is_zero() {
                acc = acc.add(&dk.scale_left(a))?;
            }
        }
        Ok(acc)
    }

    /// L = Q·R + Rem with order(Rem) < order(R).
    pub fn right_divide(&self, r: &DiffOp) -> Result<(DiffOp, DiffOp)> {
        check_chart(self, r)?;
        let m = r.order().ok_or(Error::DivisionByZero)?;
        let lr = r.leading().expect("nonzero").clone();
        let mut q = DiffOp::zero(self.chart);
        let mut rem = self.clone();
        while let Some(k) = rem.order() {
            if k < m {
                break;
            }
            let c = rem.leading().expect("nonzero").div(&lr)?;
            let mut t = vec![RatFn::zero(); k - m + 1];
            t[k - m] = c;
            let term = DiffOp::new(self.chart, t);
            rem = rem.sub(&term.mul(r)?)?;
            q = q.add(&term)?;
            if rem.order() == Some(k) {
                return Err(Error::InvalidArgument("right division failed to reduce order".into()));
            }
        }
        Ok((q, rem))
    }

    /// L(f) = Σ a_k·δ^k f.
    pub fn apply(&self, f: &RatFn) -> RatFn {
        let mut acc = RatFn::zero();
        let mut dk = f.clone();
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                dk = self.chart.derive(&dk);
            }
            if !a.is_zero() {
                acc = &acc + &(a * &dk);
            }
        }
        acc
    }

    /// Substitute D → D + r, so that ker(twist(L, r)) = (1/f)·ker(L) with f'/f = r.
    pub fn twist(&self, r: &RatFn) -> Result<DiffOp> {
        let shift = DiffOp::new(self.chart, vec![r.clone(), RatFn::one()]);
        let mut acc = DiffOp::zero(self.chart);
        let mut pk = DiffOp::one(self.chart);
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                pk = shift.mul(&pk)?;
            }
            if !a.is_zero() {
                acc = acc.add(&pk.scale_left(a))?;
            }
        }
        Ok(acc)
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Result<DiffOp> {
        let lc = self.leading().ok_or(Error::DivisionByZero)?.inv()?;
        Ok(self.scale_left(&lc))
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    /// Rewrite in the variable u = a·x + b (d/dx = a·d/du) on the chart `to`.
    pub fn affine_subst(&self, a: &CycNum, b: &CycNum, to: Chart) -> Result<DiffOp> {
        if !self.chart.is_plain() || !to.is_plain() {
            return Err(Error::UnsupportedChart(
                "affine substitution needs plain derivations".into(),
            ));
        }
        let ai = a.inv()?;
        let bi = -&(b * &ai);
        let mut ak = CycNum::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.compose_affine(&ai, &bi).scale(&ak));
            ak = &ak * a;
        }
        Ok(DiffOp::new(to, out))
    }

    /// Rewrite at infinity: x = 1/t, d/dx = −t²·d/dt, result on the t chart.
    pub fn invert(&self) -> Result<DiffOp> {
        if !self.chart.is_plain() {
            return Err(Error::UnsupportedChart("inversion needs a plain derivation".into()));
        }
        let t = Chart::T;
        let minus_t2 = RatFn::var().pow(2).scale(&CycNum::from_int(-1));
        let dx = DiffOp::new(t, vec![RatFn::zero(), minus_t2]);
        let mut acc = DiffOp::zero(t);
        let mut pk = DiffOp::one(t);
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                pk = dx.mul(&pk)?;
            }
            if !a.is_zero() {
                acc = acc.add(&pk.scale_left(&a.compose_inverse()))?;
            }
        }
        Ok(acc)
    }

    /// True when every coefficient is even in w (only meaningful on the w chart).
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_even())
    }

    /// w-chart operator with even coefficients, re-expressed in x1 = w².
    pub fn w_to_x1(&self) -> Result<DiffOp> {
        if self.chart != Chart::W {
            return Err(Error::ChartMismatch(self.chart.name(), "w"));
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (k, c) in self.coeffs.iter().enumerate() {
            out.push(
                c.deflate2()
                    .ok_or_else(|| Error::UnsupportedChart(format!("coefficient {k} is not even in w")))?,
            );
        }
        Ok(DiffOp::new(Chart::X1, out))
    }

    /// x1-chart operator lifted to the w chart (x1 ↦ w²).
    pub fn x1_to_w(&self) -> Result<DiffOp> {
        if self.chart != Chart::X1 {
            return Err(Error::ChartMismatch(self.chart.name(), "x1"));
        }
        Ok(DiffOp::new(
            Chart::W,
            self.coeffs.iter().map(|c| c.inflate2()).collect(),
        ))
    }

    /// Same coefficients, different chart tag (for charts with identical derivations).
    pub fn relabel(&self, to: Chart) -> Result<DiffOp> {
        if self.chart.is_plain() != to.is_plain() {
            return Err(Error::ChartMismatch(self.chart.name(), to.name()));
        }
        Ok(DiffOp::new(to, self.coeffs.clone()))
    }

    /// lcm of the coefficient denominators after monic normalization.
    pub fn singular_polynomial(&self) -> Result<Poly> {
        let m = self.monic()?;
        Ok(m.coeffs.iter().fold(Poly::one(), |acc, c| Poly::lcm(&acc, c.den())))
    }

    /// Complex coefficients at a point, after monic normalization is applied
    /// by the caller.
    pub fn galois(&self, k: u32) -> DiffOp {
        DiffOp::new(self.chart, self.coeffs.iter().map(|c| c.galois(k)).collect())
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "diffop v1");
        let _ = writeln!(s, "chart: {}", self.chart);
        let _ = writeln!(s, "order: {}", self.order().map_or(-1, |o| o as i64));
        for (k, c) in self.coeffs.iter().enumerate() {
            let _ = writeln!(s, "a{k}: {}", c.to_text());
        }
        s
    }
}

const MAX_ORDER: usize = 32;

impl FromStr for DiffOp {
    type Err = ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, ParseError> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim_end()))
            .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, "diffop v1")) => {}
            Some((no, _)) => return Err(ParseError::new(no, 1, "expected `diffop v1`")),
            None => return Err(ParseError::new(1, 1, "empty input")),
        }
        let (no, l) = lines.next().ok_or_else(|| ParseError::new(0, 1, "missing chart"))?;
        let ch = l
            .strip_prefix("chart:")
            .ok_or_else(|| ParseError::new(no, 1, "expected `chart:`"))?
            .trim();
        let chart = Chart::from_name(ch).ok_or_else(|| ParseError::new(no, 8, format!("unknown chart `{ch}`")))?;
        let (no, l) = lines.next().ok_or_else(|| ParseError::new(0, 1, "missing order"))?;
        let ord: i64 = l
            .strip_prefix("order:")
            .ok_or_else(|| ParseError::new(no, 1, "expected `order:`"))?
            .trim()
            .parse()
            .map_err(|_| ParseError::new(no, 8, "order must be an integer"))?;
        if ord < -1 || ord > MAX_ORDER as i64 {
            return Err(ParseError::new(no, 8, format!("order must be in -1..={MAX_ORDER}")));
        }
        let count = (ord + 1) as usize;
        let mut coeffs = Vec::with_capacity(count);
        for (no, l) in lines {
            let k = coeffs.len();
            let tag = format!("a{k}:");
            let rest = l
                .strip_prefix(&tag)
                .ok_or_else(|| ParseError::new(no, 1, format!("expected `{tag}`")))?;
            if k >= count {
                return Err(ParseError::new(no, 1, "more coefficients than the order allows"));
            }
            let offset = tag.chars().count();
            let f: RatFn = rest.parse().map_err(|e: ParseError| e.at_line(no, offset))?;
            coeffs.push(f);
        }
        if coeffs.len() != count {
            return Err(ParseError::new(
                0,
                1,
                format!("expected {count} coefficients, found {}", coeffs.len()),
            ));
        }
        if coeffs.last().is_some_and(|c| c.is_zero()) {
            return Err(ParseError::new(0, 1, "leading coefficient is zero"));
        }
        Ok(DiffOp { chart, coeffs })
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "[{c:?}]")?,
                1 => write!(f, "[{c:?}]·D")?,
                _ => write!(f, "[{c:?}]·D^{k}")?,
            }
        }
        write!(f, " ({})", self.chart)
    }
}
