//! Invertible maps of `T` and `T^2` and their orbits.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cocycle::CocycleParams;
use crate::torus::check_dim;
use crate::{Error, FixedAngle, Real, Result, TorusPoint};

/// Largest `|n|` accepted by closed-form orbits: `a(n) = n(n-1)/2` then fits
/// comfortably in 127 bits.
pub const MAX_TIME: i64 = 1 << 62;

/// `a(n) = n(n - 1)/2`, the coefficient of `alpha` in the Weyl orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TriangularCoeff {
    pub n: i64,
    pub a_of_n: i128,
}

impl TriangularCoeff {
    pub fn new(n: i64) -> Result<Self> {
        check_time(n as i128)?;
        let n128 = n as i128;
        Ok(Self {
            n,
            a_of_n: n128 * (n128 - 1) / 2,
        })
    }
}

fn check_time(n: i128) -> Result<()> {
    if n.abs() > MAX_TIME as i128 {
        Err(Error::TimeOutOfRange {
            n,
            bound: MAX_TIME as i128,
        })
    } else {
        Ok(())
    }
}

/// A concrete invertible transformation.
#[derive(Clone, Debug, PartialEq)]
pub enum SystemSpec<F = f64> {
    /// `x -> x + alpha` on `T`.
    Rotation { alpha: FixedAngle },
    /// `(x, y) -> (x + alpha, x + y)` on `T^2`.
    WeylSkew { alpha: FixedAngle },
    /// `(x, y) -> (x + alpha, y + lambda h(x) + beta)` on `T^2`; `alpha` is the cocycle's.
    CocycleSkew { cocycle: Arc<CocycleParams<F>> },
    /// `T^k`, `k >= 1`.
    PowerOf { base: Box<SystemSpec<F>>, k: i64 },
}

impl<F: Real> SystemSpec<F> {
    pub fn rotation(alpha: FixedAngle) -> Self {
        Self::Rotation { alpha }
    }

    pub fn weyl(alpha: FixedAngle) -> Self {
        Self::WeylSkew { alpha }
    }

    pub fn cocycle(params: CocycleParams<F>) -> Self {
        Self::CocycleSkew {
            cocycle: Arc::new(params),
        }
    }

    /// `self^k`; nested powers are flattened.
    pub fn power(&self, k: i64) -> Result<Self> {
        if k < 1 {
            return Err(Error::invalid("k", format!("power must be >= 1, got {k}")));
        }
        Ok(match self {
            Self::PowerOf { base, k: inner } => Self::PowerOf {
                base: base.clone(),
                k: inner
                    .checked_mul(k)
                    .ok_or_else(|| Error::invalid("k", "power overflows i64"))?,
            },
            other => Self::PowerOf {
                base: Box::new(other.clone()),
                k,
            },
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Rotation { .. } => 1,
            Self::WeylSkew { .. } | Self::CocycleSkew { .. } => 2,
            Self::PowerOf { base, .. } => base.dim(),
        }
    }

    /// Rotation number of the first coordinate (of the base map for powers).
    pub fn alpha(&self) -> FixedAngle {
        match self {
            Self::Rotation { alpha } | Self::WeylSkew { alpha } => *alpha,
            Self::CocycleSkew { cocycle } => cocycle.alpha(),
            Self::PowerOf { base, .. } => base.alpha(),
        }
    }

    /// Whether `orbit_point` is evaluated in closed form rather than by iteration.
    pub fn has_closed_form(&self) -> bool {
        match self {
            Self::Rotation { .. } | Self::WeylSkew { .. } => true,
            Self::CocycleSkew { .. } => false,
            Self::PowerOf { base, .. } => base.has_closed_form(),
        }
    }

    /// The first-coordinate factor: a rotation by `alpha` (raised to `k` for powers).
    pub fn base_rotation(&self) -> Self {
        match self {
            Self::PowerOf { base, k } => Self::PowerOf {
                base: Box::new(base.base_rotation()),
                k: *k,
            },
            other => Self::Rotation { alpha: other.alpha() },
        }
    }

    pub fn apply(&self, p: &TorusPoint) -> Result<TorusPoint> {
        check_dim(self.dim(), p.dim())?;
        Ok(self.step(p))
    }

    pub fn apply_inverse(&self, p: &TorusPoint) -> Result<TorusPoint> {
        check_dim(self.dim(), p.dim())?;
        Ok(self.step_back(p))
    }

    pub(crate) fn step(&self, p: &TorusPoint) -> TorusPoint {
        match self {
            Self::Rotation { alpha } => TorusPoint::circle(p.coord(0) + *alpha),
            Self::WeylSkew { alpha } => TorusPoint::plane(p.coord(0) + *alpha, p.coord(0) + p.coord(1)),
            Self::CocycleSkew { cocycle } => {
                let x = p.coord(0);
                TorusPoint::plane(x + cocycle.alpha(), p.coord(1) + cocycle.displacement(x))
            }
            Self::PowerOf { base, k } => base.jump(p, *k as i128),
        }
    }

    pub(crate) fn step_back(&self, p: &TorusPoint) -> TorusPoint {
        match self {
            Self::Rotation { alpha } => TorusPoint::circle(p.coord(0) - *alpha),
            Self::WeylSkew { alpha } => {
                let x = p.coord(0) - *alpha;
                TorusPoint::plane(x, p.coord(1) - x)
            }
            Self::CocycleSkew { cocycle } => {
                let x = p.coord(0) - cocycle.alpha();
                TorusPoint::plane(x, p.coord(1) - cocycle.displacement(x))
            }
            Self::PowerOf { base, k } => base.jump(p, -(*k as i128)),
        }
    }

    /// `T^n p`. Closed form for rotations and Weyl maps, iteration otherwise.
    pub fn orbit_point(&self, p: &TorusPoint, n: i64) -> Result<TorusPoint> {
        check_dim(self.dim(), p.dim())?;
        self.check_horizon(n as i128)?;
        Ok(self.jump(p, n as i128))
    }

    /// Rejects times whose closed form would overflow.
    pub(crate) fn check_horizon(&self, n: i128) -> Result<()> {
        match self {
            Self::PowerOf { base, k } => base.check_horizon(n * *k as i128),
            _ => check_time(n),
        }
    }

    /// Unchecked `T^n p`; callers validate dimension and horizon.
    pub(crate) fn jump(&self, p: &TorusPoint, n: i128) -> TorusPoint {
        match self {
            Self::Rotation { alpha } => TorusPoint::circle(p.coord(0) + alpha.mul_int(n)),
            Self::WeylSkew { alpha } => {
                let x = p.coord(0);
                let a = n * (n - 1) / 2;
                TorusPoint::plane(x + alpha.mul_int(n), p.coord(1) + x.mul_int(n) + alpha.mul_int(a))
            }
            Self::CocycleSkew { .. } => {
                let mut q = *p;
                if n >= 0 {
                    for _ in 0..n {
                        q = self.step(&q);
                    }
                } else {
                    for _ in 0..(-n) {
                        q = self.step_back(&q);
                    }
                }
                q
            }
            Self::PowerOf { base, k } => base.jump(p, n * *k as i128),
        }
    }

    /// `[T^n p for n in (n0..n1).step_by(stride)]`.
    pub fn orbit_segment(&self, p: &TorusPoint, n0: i64, n1: i64, stride: i64) -> Result<Vec<TorusPoint>> {
        if n0 > n1 {
            return Err(Error::invalid("n0", format!("range start {n0} exceeds end {n1}")));
        }
        if stride < 1 {
            return Err(Error::invalid("stride", format!("must be >= 1, got {stride}")));
        }
        check_dim(self.dim(), p.dim())?;
        self.check_horizon(n0 as i128)?;
        self.check_horizon(n1 as i128)?;
        let count = ((n1 as i128 - n0 as i128 + stride as i128 - 1) / stride as i128) as usize;
        let mut out = Vec::with_capacity(count);
        if count == 0 {
            return Ok(out);
        }
        if self.has_closed_form() {
            out.extend((0..count).map(|i| self.jump(p, n0 as i128 + i as i128 * stride as i128)));
        } else {
            let stepper = self.power(stride)?;
            let mut q = self.jump(p, n0 as i128);
            out.push(q);
            for _ in 1..count {
                q = stepper.step(&q);
                out.push(q);
            }
        }
        Ok(out)
    }

    /// Flat key-value description of this system.
    pub fn describe(&self) -> SystemDescription {
        match self {
            Self::Rotation { alpha } => SystemDescription::new("rotation", *alpha),
            Self::WeylSkew { alpha } => SystemDescription::new("weyl", *alpha),
            Self::CocycleSkew { cocycle } => SystemDescription {
                beta: Some(cocycle.beta()),
                lambda: Some(cocycle.lambda().as_f64()),
                freqs: Some(cocycle.freqs()),
                ..SystemDescription::new("cocycle", cocycle.alpha())
            },
            Self::PowerOf { base, k } => SystemDescription {
                power: Some(*k),
                ..base.describe()
            },
        }
    }

    /// Renders `key = value` lines, one per field, angles in hex.
    pub fn to_text(&self) -> String {
        self.describe().to_text()
    }

    /// Parses the format written by [`SystemSpec::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        SystemDescription::from_text(text)?.build()
    }
}

/// Serializable form of a [`SystemSpec`]; field names are the config keys.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDescription {
    pub variant: String,
    pub alpha: FixedAngle,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<FixedAngle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub freqs: Option<Vec<u64>>,
    /// Truncation order for the default frequency schedule; ignored when `freqs` is set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
}

impl SystemDescription {
    fn new(variant: &str, alpha: FixedAngle) -> Self {
        Self {
            variant: variant.to_string(),
            alpha,
            power: None,
            beta: None,
            lambda: None,
            freqs: None,
            truncation: None,
        }
    }

    pub fn build<F: Real>(&self) -> Result<SystemSpec<F>> {
        let base = match self.variant.as_str() {
            "rotation" => SystemSpec::rotation(self.alpha),
            "weyl" => SystemSpec::weyl(self.alpha),
            "cocycle" => {
                let freqs = match (&self.freqs, self.truncation) {
                    (Some(f), _) => f.clone(),
                    (None, t) => crate::cocycle::default_frequencies(t.unwrap_or(crate::cocycle::DEFAULT_TRUNCATION)),
                };
                SystemSpec::cocycle(CocycleParams::new(
                    self.alpha,
                    F::of(self.lambda.unwrap_or(1.0)),
                    self.beta.unwrap_or(FixedAngle::SQRT2_MINUS_ONE),
                    freqs,
                )?)
            }
            other => return Err(Error::Parse(format!("unknown system variant `{other}`"))),
        };
        if self.variant != "cocycle" && (self.beta.is_some() || self.lambda.is_some() || self.freqs.is_some()) {
            return Err(Error::Parse(format!(
                "beta/lambda/freqs only apply to the cocycle variant, not `{}`",
                self.variant
            )));
        }
        match self.power {
            None => Ok(base),
            Some(k) => base.power(k),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("variant = \"{}\"\nalpha = \"{}\"\n", self.variant, self.alpha.to_hex());
        if let Some(k) = self.power {
            out += &format!("power = {k}\n");
        }
        if let Some(b) = self.beta {
            out += &format!("beta = \"{}\"\n", b.to_hex());
        }
        if let Some(l) = self.lambda {
            out += &format!("lambda = {l:?}\n");
        }
        if let Some(f) = &self.freqs {
            let list: Vec<String> = f.iter().map(u64::to_string).collect();
            out += &format!("freqs = [{}]\n", list.join(", "));
        }
        if let Some(t) = self.truncation {
            out += &format!("truncation = {t}\n");
        }
        out
    }

    /// Line-oriented parser for `key = value`. Blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut variant = None;
        let mut alpha = None;
        let mut desc = Self::new("", FixedAngle::ZERO);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() || line.starts_with('[') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`", lineno + 1)))?;
            let key = key.trim();
            let value = value.trim().trim_matches('"');
            let bad = |what: &str| Error::Parse(format!("line {}: bad {what} `{value}`", lineno + 1));
            match key {
                "variant" => variant = Some(value.to_string()),
                "alpha" => alpha = Some(value.parse::<FixedAngle>()?),
                "power" => desc.power = Some(value.parse().map_err(|_| bad("power"))?),
                "beta" => desc.beta = Some(value.parse()?),
                "lambda" => desc.lambda = Some(value.parse().map_err(|_| bad("lambda"))?),
                "truncation" => desc.truncation = Some(value.parse().map_err(|_| bad("truncation"))?),
                "freqs" => {
                    let inner = value.trim_start_matches('[').trim_end_matches(']');
                    let freqs = inner
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|s| s.parse::<u64>().map_err(|_| bad("frequency list")))
                        .collect::<Result<Vec<_>>>()?;
                    desc.freqs = Some(freqs);
                }
                other => return Err(Error::Parse(format!("line {}: unknown key `{other}`", lineno + 1))),
            }
        }
        desc.variant = variant.ok_or_else(|| Error::Parse("missing `variant`".into()))?;
        desc.alpha = alpha.ok_or_else(|| Error::Parse("missing `alpha`".into()))?;
        Ok(desc)
    }
}
