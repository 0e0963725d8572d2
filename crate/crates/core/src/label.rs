//! Structured generator names.
//!
//! Every generator that appears in any table is a `Label`: a structured value
//! whose display string is a pure function of its fields, so names are stable
//! across runs. Labels also know their image under the map to the base torus,
//! which is what the projection audits compare.

use std::cmp::Ordering;

use num::{One, Signed, Zero};

use crate::error::{EngineError, Result};
use crate::forms::{sort_indices, Cycle};
use crate::ratmat::{rat, Rational};

/// A moment-map value used purely as a name ("0", "1.5", "3.5").
///
/// Stored exactly; rendered as a decimal when the denominator divides a power
/// of ten, as `p/q` otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Level {
    // numerator and denominator of the reduced fraction, denominator > 0
    num: i64,
    den: i64,
}

impl Level {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0);
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()) as i64;
        let sign = if den < 0 { -1 } else { 1 };
        Level {
            num: sign * num / g,
            den: sign * den / g,
        }
    }

    pub fn integer(n: i64) -> Self {
        Level::new(n, 1)
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.num.into(), self.den.into())
    }

    pub fn from_rational(r: &Rational) -> Option<Self> {
        let num = crate::ratmat::to_i64(&Rational::from_integer(r.numer().clone()))?;
        let den = crate::ratmat::to_i64(&Rational::from_integer(r.denom().clone()))?;
        Some(Level::new(num, den))
    }

    pub fn midpoint(a: &Level, b: &Level) -> Level {
        let r = (a.to_rational() + b.to_rational()) / rat(2);
        Level::from_rational(&r).expect("midpoint fits")
    }

    /// Parses an exact decimal or fraction literal ("1.5", "7", "3/2").
    pub fn parse(s: &str) -> Result<Level> {
        let s = s.trim();
        let err = || EngineError::Parse {
            detail: format!("bad level value `{s}`"),
        };
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| err())?;
            let d: i64 = d.trim().parse().map_err(|_| err())?;
            if d == 0 {
                return Err(err());
            }
            return Ok(Level::new(n, d));
        }
        if let Some((int, frac)) = s.split_once('.') {
            let neg = int.trim_start().starts_with('-');
            let int: i64 = if int.is_empty() || int == "-" {
                0
            } else {
                int.parse().map_err(|_| err())?
            };
            if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(err());
            }
            let scale = 10i64.checked_pow(frac.len() as u32).ok_or_else(err)?;
            let frac: i64 = frac.parse().map_err(|_| err())?;
            let num = int.abs() * scale + frac;
            let num = if neg { -num } else { num };
            return Ok(Level::new(num, scale));
        }
        let n: i64 = s.parse().map_err(|_| err())?;
        Ok(Level::integer(n))
    }

    pub fn render(&self) -> String {
        if self.den == 1 {
            return self.num.to_string();
        }
        // decimal expansion when denominator is 2^a * 5^b
        let mut d = self.den;
        let mut twos = 0u32;
        let mut fives = 0u32;
        while d % 2 == 0 {
            d /= 2;
            twos += 1;
        }
        while d % 5 == 0 {
            d /= 5;
            fives += 1;
        }
        if d != 1 {
            return format!("{}/{}", self.num, self.den);
        }
        let places = twos.max(fives);
        let scale = 10i64.pow(places);
        let scaled = self.num * (scale / self.den);
        let sign = if scaled < 0 { "-" } else { "" };
        let abs = scaled.abs();
        let int = abs / scale;
        let frac = abs % scale;
        let frac_str = format!("{:0width$}", frac, width = places as usize);
        let frac_str = frac_str.trim_end_matches('0');
        if frac_str.is_empty() {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac_str}")
        }
    }
}

impl PartialOrd for Level {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Level {
    fn cmp(&self, other: &Self) -> Ordering {
        // numeric comparison: denominators are positive
        let lhs = (self.num as i128) * (other.den as i128);
        let rhs = (other.num as i128) * (self.den as i128);
        lhs.cmp(&rhs)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Side of a critical level: the sphere bundle below (−) or above (+).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Minus,
    Plus,
}

impl Side {
    pub fn suffix(&self) -> &'static str {
        match self {
            Side::Minus => "-",
            Side::Plus => "+",
        }
    }
}

/// Structured generator name. The display string is a pure function of the
/// fields.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// L_I^s: a torus in a regular level set lifting the base torus L_I.
    /// The empty tuple is the point class of the level set.
    LevelTorus { indices: Vec<usize>, level: Level },
    /// L_fiber^s (no index) or L_{iF}^s: fiber-direction classes of a level.
    FiberClass { index: Option<usize>, level: Level },
    /// Z_I^λ: classes of the fixed torus at a critical level (I of size 0,1,2).
    FixedTorus { indices: Vec<usize>, lambda: Level },
    /// Z_I^{λ,±}: sections of the normal sphere bundle over the fixed torus.
    SphereSection {
        indices: Vec<usize>,
        lambda: Level,
        side: Side,
    },
    /// Z_F^{λ,±} / Z_{iF}^{λ,±}: fiber-direction classes of the sphere bundle.
    SphereFiber {
        index: Option<usize>,
        lambda: Level,
        side: Side,
    },
    /// T²: trace of a diagonal loop swept through the whole moment interval.
    GradientTorus { indices: Vec<usize> },
    /// Invariant sphere connecting the fixed tori at two critical levels.
    InvariantSphere { from: Level, to: Level },
    /// A named loop (the section loop of the circle-valued moment map).
    Loop { name: String },
    /// A lift of a multi-term base cycle, e.g. (L13-L24)^3.5.
    CombinationLift { cycle: Cycle, level: Level },
}

impl Label {
    pub fn display(&self) -> String {
        match self {
            Label::LevelTorus { indices, level } => {
                if indices.is_empty() {
                    format!("pt^{}", level.render())
                } else {
                    format!("L{}^{}", digits(indices), level.render())
                }
            }
            Label::FiberClass { index, level } => match index {
                None => format!("Lf^{}", level.render()),
                Some(i) => format!("L{i}f^{}", level.render()),
            },
            Label::FixedTorus { indices, lambda } => {
                if indices.is_empty() {
                    format!("Zpt^{}", lambda.render())
                } else {
                    format!("Z{}^{}", digits(indices), lambda.render())
                }
            }
            Label::SphereSection {
                indices,
                lambda,
                side,
            } => {
                if indices.is_empty() {
                    format!("Zpt^{}{}", lambda.render(), side.suffix())
                } else {
                    format!("Z{}^{}{}", digits(indices), lambda.render(), side.suffix())
                }
            }
            Label::SphereFiber {
                index,
                lambda,
                side,
            } => match index {
                None => format!("Zf^{}{}", lambda.render(), side.suffix()),
                Some(i) => format!("Z{i}f^{}{}", lambda.render(), side.suffix()),
            },
            Label::GradientTorus { indices } => {
                let parts: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
                format!("T{}", parts.join("+"))
            }
            Label::InvariantSphere { from, to } => {
                format!("G{}{}", from.render(), to.render())
            }
            Label::Loop { name } => name.clone(),
            Label::CombinationLift { cycle, level } => {
                format!("({})^{}", cycle.render(), level.render())
            }
        }
    }

    /// The class of the label's image in the homology of the base torus, as a
    /// cycle of the given degree, when meaningful.
    ///
    /// Fiber-direction classes, gradient tori, invariant spheres and loops
    /// all project to lower-dimensional sets and contribute zero.
    pub fn base_projection(&self, n: usize, degree: usize) -> Cycle {
        match self {
            Label::LevelTorus { indices, .. } if indices.len() == degree => {
                Cycle::basis(n, indices)
            }
            Label::FixedTorus { indices, .. } if indices.len() == degree => {
                Cycle::basis(n, indices)
            }
            Label::SphereSection { indices, .. } if indices.len() == degree => {
                Cycle::basis(n, indices)
            }
            Label::CombinationLift { cycle, .. } if cycle.degree() == degree => cycle.clone(),
            _ => Cycle::zero(n, degree),
        }
    }

    /// Rewrites the label through the index substitution i ↦ σ(i), level
    /// substitution s ↦ mirror(s) and side substitution, returning the sign
    /// the index sort picks up.
    pub fn map_indices_and_levels(
        &self,
        index_map: impl Fn(usize) -> usize,
        level_map: impl Fn(&Level) -> Level,
        side_map: impl Fn(Side) -> Side,
    ) -> (Label, i64) {
        let sort = |indices: &[usize]| -> (Vec<usize>, i64) {
            let mapped: Vec<usize> = indices.iter().map(|&i| index_map(i)).collect();
            sort_indices(&mapped).expect("substitution must stay injective")
        };
        match self {
            Label::LevelTorus { indices, level } => {
                let (ix, sign) = sort(indices);
                (
                    Label::LevelTorus {
                        indices: ix,
                        level: level_map(level),
                    },
                    sign,
                )
            }
            Label::FiberClass { index, level } => (
                Label::FiberClass {
                    index: index.map(&index_map),
                    level: level_map(level),
                },
                1,
            ),
            Label::FixedTorus { indices, lambda } => {
                let (ix, sign) = sort(indices);
                (
                    Label::FixedTorus {
                        indices: ix,
                        lambda: level_map(lambda),
                    },
                    sign,
                )
            }
            Label::SphereSection {
                indices,
                lambda,
                side,
            } => {
                let (ix, sign) = sort(indices);
                (
                    Label::SphereSection {
                        indices: ix,
                        lambda: level_map(lambda),
                        side: side_map(*side),
                    },
                    sign,
                )
            }
            Label::SphereFiber {
                index,
                lambda,
                side,
            } => (
                Label::SphereFiber {
                    index: index.map(&index_map),
                    lambda: level_map(lambda),
                    side: side_map(*side),
                },
                1,
            ),
            Label::GradientTorus { indices } => {
                let mut ix: Vec<usize> = indices.iter().map(|&i| index_map(i)).collect();
                ix.sort_unstable();
                (Label::GradientTorus { indices: ix }, 1)
            }
            Label::InvariantSphere { from, to } => (
                Label::InvariantSphere {
                    from: level_map(from),
                    to: level_map(to),
                },
                1,
            ),
            Label::Loop { name } => (Label::Loop { name: name.clone() }, 1),
            Label::CombinationLift { cycle, level } => (
                Label::CombinationLift {
                    cycle: cycle.map_indices(&index_map),
                    level: level_map(level),
                },
                1,
            ),
        }
    }
}

/// A formal linear combination of labels, used for ledgers and lift
/// declarations.
#[derive(Clone, Debug, PartialEq)]
pub struct Combo(pub Vec<(Label, Rational)>);

impl Combo {
    pub fn zero() -> Self {
        Combo(Vec::new())
    }

    pub fn single(label: Label) -> Self {
        Combo(vec![(label, Rational::one())])
    }

    pub fn push(&mut self, label: Label, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        if let Some(entry) = self.0.iter_mut().find(|(l, _)| *l == label) {
            entry.1 += coeff;
        } else {
            // keep terms sorted so equal combinations compare equal
            let at = self.0.partition_point(|(l, _)| l < &label);
            self.0.insert(at, (label, coeff));
        }
        self.0.retain(|(_, c)| !c.is_zero());
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// The single label with coefficient ±1, if that is all there is.
    pub fn as_signed_single(&self) -> Option<(Label, i64)> {
        if self.0.len() != 1 {
            return None;
        }
        let (l, c) = &self.0[0];
        if c.is_one() {
            Some((l.clone(), 1))
        } else if (-c.clone()).is_one() {
            Some((l.clone(), -1))
        } else {
            None
        }
    }

    pub fn negate(&self) -> Combo {
        Combo(
            self.0
                .iter()
                .map(|(l, c)| (l.clone(), -c.clone()))
                .collect(),
        )
    }

    pub fn render(&self) -> String {
        if self.0.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (label, coeff) in &self.0 {
            let mag = coeff.abs();
            if coeff < &Rational::zero() {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            if !mag.is_one() {
                out.push_str(&crate::ratmat::fmt_rational(&mag));
                out.push('*');
            }
            out.push_str(&label.display());
        }
        out
    }
}

impl PartialOrd for Combo {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.render().cmp(&other.render()))
    }
}

fn digits(indices: &[usize]) -> String {
    indices.iter().map(|i| i.to_string()).collect()
}

// ---------------------------------------------------------------------------
// label token parsing (scenario files and CLI)
// ---------------------------------------------------------------------------

/// Parses one label token, e.g. `L13^0`, `L2f^1.5`, `Lf^0`, `pt^3.5`,
/// `Z24^2`, `Z1f^2+`, `T1+3`, `G61`, `gamma`, `(L13-L24)^3.5`.
pub fn parse_label(token: &str) -> Result<Label> {
    let err = |detail: String| EngineError::Parse { detail };
    let t = token.trim();
    if t.is_empty() {
        return Err(err("empty label token".into()));
    }
    if let Some(rest) = t.strip_prefix("pt^") {
        return Ok(Label::LevelTorus {
            indices: vec![],
            level: Level::parse(rest)?,
        });
    }
    if let Some(rest) = t.strip_prefix("Zpt^") {
        let (lambda, side) = split_side(rest)?;
        return Ok(match side {
            None => Label::FixedTorus {
                indices: vec![],
                lambda,
            },
            Some(side) => Label::SphereSection {
                indices: vec![],
                lambda,
                side,
            },
        });
    }
    if t.starts_with('(') {
        let close = t
            .find(')')
            .ok_or_else(|| err(format!("unclosed paren in `{t}`")))?;
        let inner = &t[1..close];
        let rest = t[close + 1..]
            .strip_prefix('^')
            .ok_or_else(|| err(format!("missing level in `{t}`")))?;
        // degree-2 combination lifts are the only parenthesized labels used
        let cycle = crate::forms::parse_cycle(inner, 4, 2)?;
        return Ok(Label::CombinationLift {
            cycle,
            level: Level::parse(rest)?,
        });
    }
    if let Some(rest) = t.strip_prefix('T') {
        let indices: Result<Vec<usize>> = rest
            .split('+')
            .map(|p| {
                p.parse::<usize>()
                    .map_err(|_| err(format!("bad gradient torus `{t}`")))
            })
            .collect();
        return Ok(Label::GradientTorus { indices: indices? });
    }
    if let Some(rest) = t.strip_prefix('G') {
        let digits: Vec<char> = rest.chars().collect();
        if digits.len() == 2 && digits.iter().all(|c| c.is_ascii_digit()) {
            return Ok(Label::InvariantSphere {
                from: Level::integer(digits[0].to_digit(10).unwrap() as i64),
                to: Level::integer(digits[1].to_digit(10).unwrap() as i64),
            });
        }
        return Err(err(format!("bad invariant sphere `{t}`")));
    }
    if let Some(rest) = t.strip_prefix('L') {
        let (head, level) = rest
            .split_once('^')
            .ok_or_else(|| err(format!("missing `^level` in `{t}`")))?;
        let level = Level::parse(level)?;
        if head == "f" {
            return Ok(Label::FiberClass { index: None, level });
        }
        if let Some(ix) = head.strip_suffix('f') {
            let i: usize = ix
                .parse()
                .map_err(|_| err(format!("bad fiber index in `{t}`")))?;
            return Ok(Label::FiberClass {
                index: Some(i),
                level,
            });
        }
        let indices: Vec<usize> = head
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| err(format!("bad indices in `{t}`")))?;
        let (sorted, sign) =
            sort_indices(&indices).ok_or_else(|| err(format!("repeated index in `{t}`")))?;
        if sign != 1 {
            return Err(err(format!(
                "label `{t}` names a negated generator; write the sorted form instead"
            )));
        }
        return Ok(Label::LevelTorus {
            indices: sorted,
            level,
        });
    }
    if let Some(rest) = t.strip_prefix('Z') {
        let (head, tail) = rest
            .split_once('^')
            .ok_or_else(|| err(format!("missing `^level` in `{t}`")))?;
        let (lambda, side) = split_side(tail)?;
        if head == "f" {
            let side = side.ok_or_else(|| err(format!("sphere fiber `{t}` needs a ± side")))?;
            return Ok(Label::SphereFiber {
                index: None,
                lambda,
                side,
            });
        }
        if let Some(ix) = head.strip_suffix('f') {
            let side = side.ok_or_else(|| err(format!("sphere fiber `{t}` needs a ± side")))?;
            let i: usize = ix
                .parse()
                .map_err(|_| err(format!("bad fiber index in `{t}`")))?;
            return Ok(Label::SphereFiber {
                index: Some(i),
                lambda,
                side,
            });
        }
        let indices: Vec<usize> = head
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| err(format!("bad indices in `{t}`")))?;
        let (sorted, sign) =
            sort_indices(&indices).ok_or_else(|| err(format!("repeated index in `{t}`")))?;
        if sign != 1 {
            return Err(err(format!(
                "label `{t}` names a negated generator; write the sorted form instead"
            )));
        }
        return Ok(match side {
            None => Label::FixedTorus {
                indices: sorted,
                lambda,
            },
            Some(side) => Label::SphereSection {
                indices: sorted,
                lambda,
                side,
            },
        });
    }
    if t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Ok(Label::Loop {
            name: t.to_string(),
        });
    }
    Err(err(format!("unrecognized label `{t}`")))
}

fn split_side(s: &str) -> Result<(Level, Option<Side>)> {
    if let Some(head) = s.strip_suffix('+') {
        Ok((Level::parse(head)?, Some(Side::Plus)))
    } else if let Some(head) = s.strip_suffix('-') {
        Ok((Level::parse(head)?, Some(Side::Minus)))
    } else {
        Ok((Level::parse(s)?, None))
    }
}

/// Parses a signed sum of label terms with optional rational coefficients:
/// `L1^0+L3^0-L1^3.5-L3^3.5`, `-2*L13^0+3/2*Z24^2`, `Z13^1-+Zf^1+`.
///
/// A trailing `+` or `-` right after a `Z…^level` head is a sphere-bundle
/// side marker, not a sign; inside `T1+3` the plus joins diagonal indices.
pub fn parse_combo(input: &str) -> Result<Combo> {
    let s: Vec<char> = input.chars().filter(|c| !c.is_whitespace()).collect();
    let err = |detail: String| EngineError::Parse { detail };
    if s.is_empty() {
        return Err(err("empty combination".into()));
    }
    if s.len() == 1 && s[0] == '0' {
        return Ok(Combo::zero());
    }
    let is_level_char = |c: char| c.is_ascii_digit() || c == '.' || c == '/';
    let mut combo = Combo::zero();
    let mut pos = 0usize;
    while pos < s.len() {
        let mut coeff = Rational::one();
        if s[pos] == '+' {
            pos += 1;
        } else if s[pos] == '-' {
            coeff = -coeff;
            pos += 1;
        }
        // optional rational coefficient, only when followed by '*'
        let digits_end = {
            let mut p = pos;
            while p < s.len() && s[p].is_ascii_digit() {
                p += 1;
            }
            if p < s.len() && p > pos && s[p] == '/' {
                p += 1;
                while p < s.len() && s[p].is_ascii_digit() {
                    p += 1;
                }
            }
            p
        };
        if digits_end > pos && digits_end < s.len() && s[digits_end] == '*' {
            let text: String = s[pos..digits_end].iter().collect();
            let value = if let Some((n, d)) = text.split_once('/') {
                let n: i64 = n.parse().map_err(|_| err(format!("bad coefficient {text}")))?;
                let d: i64 = d.parse().map_err(|_| err(format!("bad coefficient {text}")))?;
                if d == 0 {
                    return Err(err(format!("zero denominator in {text}")));
                }
                Rational::new(n.into(), d.into())
            } else {
                Rational::from_integer(
                    text.parse::<i64>()
                        .map_err(|_| err(format!("bad coefficient {text}")))?
                        .into(),
                )
            };
            coeff *= value;
            pos = digits_end + 1;
        }
        // the label token
        let start = pos;
        if pos >= s.len() {
            return Err(err(format!("dangling sign in `{input}`")));
        }
        if s[pos] == '(' {
            let mut depth = 0usize;
            while pos < s.len() {
                match s[pos] {
                    '(' => depth += 1,
                    ')' => {
                        depth -= 1;
                        if depth == 0 {
                            pos += 1;
                            break;
                        }
                    }
                    _ => {}
                }
                pos += 1;
            }
            if pos < s.len() && s[pos] == '^' {
                pos += 1;
                while pos < s.len() && is_level_char(s[pos]) {
                    pos += 1;
                }
            }
        } else if s[pos] == 'T' {
            pos += 1;
            while pos < s.len() && s[pos].is_ascii_digit() {
                pos += 1;
            }
            // '+digits' chunks extend a diagonal torus name only when the
            // digits are not the coefficient of a following term
            while pos + 1 < s.len() && s[pos] == '+' && s[pos + 1].is_ascii_digit() {
                let mut p = pos + 1;
                while p < s.len() && s[p].is_ascii_digit() {
                    p += 1;
                }
                if p < s.len() && (s[p] == '*' || s[p] == '^' || s[p] == '/') {
                    break;
                }
                pos = p;
            }
        } else {
            let head_is_z = s[pos] == 'Z';
            while pos < s.len() && (s[pos].is_ascii_alphanumeric() || s[pos] == '_') {
                pos += 1;
            }
            if pos < s.len() && s[pos] == '^' {
                pos += 1;
                while pos < s.len() && is_level_char(s[pos]) {
                    pos += 1;
                }
                // a sphere-bundle side marker ends the token, so a +/- here
                // is a side exactly when a sign (or the end) follows it;
                // otherwise it is the sign of the next term
                if head_is_z && pos < s.len() && (s[pos] == '+' || s[pos] == '-') {
                    let after = pos + 1;
                    if after == s.len() || s[after] == '+' || s[after] == '-' {
                        pos += 1;
                    }
                }
            }
        }
        if start == pos {
            return Err(err(format!("expected a label at position {start} in `{input}`")));
        }
        let token: String = s[start..pos].iter().collect();
        combo.push(parse_label(&token)?, coeff);
    }
    Ok(combo)
}
