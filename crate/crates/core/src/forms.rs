//! The exterior algebra on n circle coordinates and its dual homology basis.
//!
//! Forms are elements of Λ(x¹,…,xⁿ), keyed by strictly increasing index
//! tuples; a tuple written out of order picks up the sign of the sorting
//! permutation, so `s42` parses to −σ₂₄ and `L42` to −L₂₄. Cycles share the
//! same representation and pair with forms through the Kronecker pairing on
//! sorted tuples.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use crate::error::{EngineError, Result};
use crate::ratmat::{fmt_rational, rat, Rational, RationalMatrix, Subspace};

/// Sorts an index tuple, returning the permutation sign, or `None` when an
/// index repeats (the term is zero).
pub fn sort_indices(indices: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v = indices.to_vec();
    let mut sign = 1i64;
    // insertion sort, counting inversions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, sign))
}

/// All strictly increasing k-tuples from {1..n}, in lexicographic order.
/// This ordering is the canonical basis of Λᵏ and of degree-k homology.
pub fn tuple_basis(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..=n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(1, n, k, &mut current, &mut out);
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Shared term storage for forms and cycles: sorted tuple -> nonzero rational.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Terms {
    n: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, Rational>,
}

impl Terms {
    fn zero(n: usize, degree: usize) -> Self {
        Terms {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    fn add_term(&mut self, indices: &[usize], coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let (sorted, sign) = match sort_indices(indices) {
            Some(x) => x,
            None => return,
        };
        assert!(
            sorted.iter().all(|&i| 1 <= i && i <= self.n),
            "index out of range"
        );
        assert_eq!(sorted.len(), self.degree, "term degree mismatch");
        let c = coeff * rat(sign);
        let entry = self.terms.entry(sorted).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            let key: Vec<Vec<usize>> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    fn coefficients(&self, basis: &[Vec<usize>]) -> Vec<Rational> {
        basis
            .iter()
            .map(|t| self.terms.get(t).cloned().unwrap_or_else(Rational::zero))
            .collect()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn render(&self, symbol_for: impl Fn(&[usize]) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (tuple, coeff) in &self.terms {
            let sym = symbol_for(tuple);
            let mag = coeff.abs();
            let mag_str = if mag.is_one() {
                String::new()
            } else {
                fmt_rational(&mag)
            };
            if coeff < &Rational::zero() {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            out.push_str(&mag_str);
            out.push_str(&sym);
        }
        out
    }
}

/// An element of the exterior algebra Λ(x¹,…,xⁿ), e.g. an Euler class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Form(Terms);

/// A degree-k homology class of Tⁿ in the torus basis dual to the forms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle(Terms);

impl Form {
    pub fn zero(n: usize, degree: usize) -> Self {
        Form(Terms::zero(n, degree))
    }

    /// σ_I for a (possibly unsorted) index tuple I, with the permutation sign.
    pub fn basis(n: usize, indices: &[usize]) -> Self {
        let mut f = Form(Terms::zero(n, indices.len()));
        f.0.add_term(indices, Rational::one());
        f
    }

    pub fn with_term(mut self, indices: &[usize], coeff: Rational) -> Self {
        self.0.add_term(indices, coeff);
        self
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn neg(&self) -> Form {
        let mut t = self.0.clone();
        for v in t.terms.values_mut() {
            *v = -v.clone();
        }
        Form(t)
    }

    pub fn add(&self, other: &Form) -> Form {
        assert_eq!(self.n(), other.n());
        assert_eq!(self.degree(), other.degree());
        let mut t = self.0.clone();
        for (k, v) in &other.0.terms {
            t.add_term(k, v.clone());
        }
        Form(t)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.0.terms.iter()
    }

    /// Coefficient vector in the lexicographic tuple basis.
    pub fn coefficients(&self) -> Vec<Rational> {
        self.0.coefficients(&tuple_basis(self.n(), self.degree()))
    }

    pub fn has_integer_coefficients(&self) -> bool {
        self.0.terms.values().all(crate::ratmat::is_integer)
    }

    /// Relabels indices through `map` (1-based), tracking sorting signs.
    pub fn map_indices(&self, map: impl Fn(usize) -> usize) -> Form {
        let mut out = Terms::zero(self.n(), self.degree());
        for (t, c) in &self.0.terms {
            let mapped: Vec<usize> = t.iter().map(|&i| map(i)).collect();
            out.add_term(&mapped, c.clone());
        }
        Form(out)
    }

    /// Graded-commutative wedge product.
    pub fn wedge(&self, other: &Form) -> Form {
        assert_eq!(self.n(), other.n(), "wedge over different tori");
        let mut out = Terms::zero(self.n(), self.degree() + other.degree());
        for (ta, ca) in &self.0.terms {
            for (tb, cb) in &other.0.terms {
                let mut concat = ta.clone();
                concat.extend_from_slice(tb);
                out.add_term(&concat, ca * cb);
            }
        }
        Form(out)
    }

    /// Kronecker pairing extended bilinearly: ⟨σ_I, L_J⟩ = δ_IJ.
    pub fn pair(&self, cycle: &Cycle) -> Result<Rational> {
        if self.n() != cycle.n() {
            return Err(EngineError::DimensionMismatch {
                expected: self.n(),
                got: cycle.n(),
            });
        }
        if self.degree() != cycle.degree() {
            return Err(EngineError::UnsupportedDegree {
                degree: cycle.degree(),
            });
        }
        let mut acc = Rational::zero();
        for (t, c) in &self.0.terms {
            if let Some(d) = cycle.0.terms.get(t) {
                acc += c * d;
            }
        }
        Ok(acc)
    }

    pub fn render(&self) -> String {
        self.0.render(|t| {
            let digits: String = t.iter().map(|i| i.to_string()).collect();
            format!("s{digits}")
        })
    }
}

impl Cycle {
    pub fn zero(n: usize, degree: usize) -> Self {
        Cycle(Terms::zero(n, degree))
    }

    /// L_I for a (possibly unsorted) index tuple I, with the permutation sign.
    pub fn basis(n: usize, indices: &[usize]) -> Self {
        let mut c = Cycle(Terms::zero(n, indices.len()));
        c.0.add_term(indices, Rational::one());
        c
    }

    pub fn with_term(mut self, indices: &[usize], coeff: Rational) -> Self {
        self.0.add_term(indices, coeff);
        self
    }

    pub fn from_coefficients(n: usize, degree: usize, coeffs: &[Rational]) -> Self {
        let basis = tuple_basis(n, degree);
        assert_eq!(basis.len(), coeffs.len());
        let mut c = Cycle(Terms::zero(n, degree));
        for (t, co) in basis.iter().zip(coeffs) {
            c.0.add_term(t, co.clone());
        }
        c
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn neg(&self) -> Cycle {
        let mut t = self.0.clone();
        for v in t.terms.values_mut() {
            *v = -v.clone();
        }
        Cycle(t)
    }

    pub fn add(&self, other: &Cycle) -> Cycle {
        assert_eq!(self.n(), other.n());
        assert_eq!(self.degree(), other.degree());
        let mut t = self.0.clone();
        for (k, v) in &other.0.terms {
            t.add_term(k, v.clone());
        }
        Cycle(t)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.0.terms.iter()
    }

    pub fn coefficients(&self) -> Vec<Rational> {
        self.0.coefficients(&tuple_basis(self.n(), self.degree()))
    }

    /// A single sorted tuple with coefficient one, if that is all there is.
    pub fn as_single_tuple(&self) -> Option<Vec<usize>> {
        if self.0.terms.len() == 1 {
            let (t, c) = self.0.terms.iter().next().unwrap();
            if c.is_one() {
                return Some(t.clone());
            }
        }
        None
    }

    /// Relabels indices through `map` (1-based), tracking sorting signs.
    pub fn map_indices(&self, map: impl Fn(usize) -> usize) -> Cycle {
        let mut out = Terms::zero(self.n(), self.degree());
        for (t, c) in &self.0.terms {
            let mapped: Vec<usize> = t.iter().map(|&i| map(i)).collect();
            out.add_term(&mapped, c.clone());
        }
        Cycle(out)
    }

    pub fn render(&self) -> String {
        self.0.render(|t| {
            let digits: String = t.iter().map(|i| i.to_string()).collect();
            format!("L{digits}")
        })
    }
}

/// Matrix of e∧ : Λᵏ → Λᵏ⁺² in the lexicographic tuple bases.
pub fn wedge_map_matrix(e: &Form, k: usize) -> RationalMatrix {
    assert_eq!(e.degree(), 2, "Euler class must have degree 2");
    let n = e.n();
    let dom = tuple_basis(n, k);
    let cod = tuple_basis(n, k + 2);
    let mut m = RationalMatrix::zero(cod.len(), dom.len());
    for (j, t) in dom.iter().enumerate() {
        let image = e.wedge(&Form::basis(n, t));
        for (tuple, coeff) in image.terms() {
            let i = cod.iter().position(|c| c == tuple).expect("tuple in basis");
            m.set(i, j, coeff.clone());
        }
    }
    m
}

/// All degree-k cycles pairing to zero with every listed form.
///
/// The rows of the returned subspace are coefficient vectors in the
/// lexicographic degree-k tuple basis; they come out in canonical echelon
/// form, so e.g. the annihilator of σ₁₃+σ₂₄ is spanned by L₁₂, L₁₃−L₂₄,
/// L₁₄, L₂₃, L₃₄ in that order.
pub fn annihilator(forms: &[Form], n: usize, k: usize) -> Subspace {
    let basis = tuple_basis(n, k);
    if forms.is_empty() {
        return Subspace::full(basis.len());
    }
    let rows: Vec<Vec<Rational>> = forms
        .iter()
        .map(|f| {
            assert_eq!(f.n(), n);
            assert_eq!(f.degree(), k, "annihilator forms must have degree k");
            f.coefficients()
        })
        .collect();
    RationalMatrix::from_rows(rows).kernel_basis()
}

/// Annihilator inside degree-k homology of a set of degree-k forms given as
/// coefficient vectors (used for kernels of wedge maps).
pub fn annihilator_of_vectors(vectors: &[Vec<Rational>], n: usize, k: usize) -> Subspace {
    let dim = binomial(n, k);
    if vectors.is_empty() {
        return Subspace::full(dim);
    }
    RationalMatrix::from_rows(vectors.to_vec()).kernel_basis()
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

/// Parses a form over the grammar `[+-] [coeff] s<digits> (...)`, e.g.
/// "-s31-s42", "s13+s24", "2s12", "0".
pub fn parse_form(input: &str, n: usize, degree: usize) -> Result<Form> {
    let terms = parse_terms(input, 's')?;
    let mut f = Form::zero(n, degree);
    for (indices, coeff) in terms {
        if indices.len() != degree {
            return Err(EngineError::Parse {
                detail: format!(
                    "term of degree {} in a degree-{} form: {input}",
                    indices.len(),
                    degree
                ),
            });
        }
        if indices.iter().any(|&i| i < 1 || i > n) {
            return Err(EngineError::Parse {
                detail: format!("index out of range 1..{n} in {input}"),
            });
        }
        f.0.add_term(&indices, coeff);
    }
    Ok(f)
}

/// Parses a cycle over the grammar `[+-] [coeff] L<digits> (...)`.
pub fn parse_cycle(input: &str, n: usize, degree: usize) -> Result<Cycle> {
    let terms = parse_terms(input, 'L')?;
    let mut c = Cycle::zero(n, degree);
    for (indices, coeff) in terms {
        if indices.len() != degree {
            return Err(EngineError::Parse {
                detail: format!(
                    "term of degree {} in a degree-{} cycle: {input}",
                    indices.len(),
                    degree
                ),
            });
        }
        if indices.iter().any(|&i| i < 1 || i > n) {
            return Err(EngineError::Parse {
                detail: format!("index out of range 1..{n} in {input}"),
            });
        }
        c.0.add_term(&indices, coeff);
    }
    Ok(c)
}

fn parse_terms(input: &str, symbol: char) -> Result<Vec<(Vec<usize>, Rational)>> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(EngineError::Parse {
            detail: "empty expression".into(),
        });
    }
    if s == "0" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut pos = 0usize;
    while pos < chars.len() {
        let mut sign = Rational::one();
        if chars[pos] == '+' {
            pos += 1;
        } else if chars[pos] == '-' {
            sign = -sign;
            pos += 1;
        }
        // optional rational coefficient: int or int/int
        let start = pos;
        while pos < chars.len() && chars[pos].is_ascii_digit() {
            pos += 1;
        }
        let mut numer: Option<String> = if pos > start {
            Some(chars[start..pos].iter().collect())
        } else {
            None
        };
        let mut denom: Option<String> = None;
        if pos < chars.len() && chars[pos] == '/' && numer.is_some() {
            pos += 1;
            let dstart = pos;
            while pos < chars.len() && chars[pos].is_ascii_digit() {
                pos += 1;
            }
            if pos == dstart {
                return Err(EngineError::Parse {
                    detail: format!("missing denominator in {input}"),
                });
            }
            denom = Some(chars[dstart..pos].iter().collect());
        }
        if pos < chars.len() && chars[pos] == '*' {
            pos += 1;
        }
        if pos >= chars.len() || chars[pos] != symbol {
            return Err(EngineError::Parse {
                detail: format!("expected `{symbol}<indices>` at position {pos} in {input}"),
            });
        }
        pos += 1;
        let istart = pos;
        while pos < chars.len() && chars[pos].is_ascii_digit() {
            pos += 1;
        }
        if pos == istart {
            return Err(EngineError::Parse {
                detail: format!("missing indices after `{symbol}` in {input}"),
            });
        }
        let indices: Vec<usize> = chars[istart..pos]
            .iter()
            .map(|c| c.to_digit(10).unwrap() as usize)
            .collect();
        let coeff = match (numer.take(), denom.take()) {
            (None, _) => sign,
            (Some(nu), None) => {
                sign * Rational::from_integer(
                    nu.parse::<i64>()
                        .map_err(|_| EngineError::Parse {
                            detail: format!("bad coefficient in {input}"),
                        })?
                        .into(),
                )
            }
            (Some(nu), Some(de)) => {
                let nu: i64 = nu.parse().map_err(|_| EngineError::Parse {
                    detail: format!("bad coefficient in {input}"),
                })?;
                let de: i64 = de.parse().map_err(|_| EngineError::Parse {
                    detail: format!("bad coefficient in {input}"),
                })?;
                if de == 0 {
                    return Err(EngineError::Parse {
                        detail: format!("zero denominator in {input}"),
                    });
                }
                sign * Rational::new(nu.into(), de.into())
            }
        };
        out.push((indices, coeff));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::rat;

    /// Independent sign oracle: count inversions directly.
    fn inversion_sign(indices: &[usize]) -> i64 {
        let mut sign = 1;
        for i in 0..indices.len() {
            for j in i + 1..indices.len() {
                if indices[i] > indices[j] {
                    sign = -sign;
                }
            }
        }
        sign
    }

    #[test]
    fn wedge_disjoint_indices() {
        let a = Form::basis(4, &[1]);
        let b = Form::basis(4, &[2]);
        assert_eq!(a.wedge(&b), Form::basis(4, &[1, 2]));
    }

    #[test]
    fn wedge_transposition_sign() {
        let a = Form::basis(4, &[2]);
        let b = Form::basis(4, &[1]);
        assert_eq!(a.wedge(&b), Form::basis(4, &[1, 2]).neg());
    }

    #[test]
    fn wedge_of_mixed_euler_class_with_itself() {
        // (σ₃₁+σ₄₂) ∧ (σ₃₁+σ₄₂), expanded by bilinearity with the inversion
        // oracle: σ₃₁∧σ₄₂ contributes sign([3,1,4,2]) and σ₄₂∧σ₃₁ contributes
        // sign([4,2,3,1]); the squares vanish.
        let e = Form::basis(4, &[3, 1]).add(&Form::basis(4, &[4, 2]));
        let sq = e.wedge(&e);
        let expected_coeff =
            rat(inversion_sign(&[3, 1, 4, 2])) + rat(inversion_sign(&[4, 2, 3, 1]));
        assert_eq!(expected_coeff, rat(-2));
        let expected = Form::zero(4, 4).with_term(&[1, 2, 3, 4], expected_coeff);
        assert_eq!(sq, expected);
        assert!(!sq.is_zero());
    }

    #[test]
    fn pairing_dual_basis() {
        let f = Form::basis(4, &[1, 3]);
        let c = Cycle::basis(4, &[1, 3]);
        assert_eq!(f.pair(&c).unwrap(), rat(1));
    }

    #[test]
    fn pairing_of_mixed_euler_class_with_difference_cycle() {
        // sign convention σ₃₁ = −σ₁₃, σ₄₂ = −σ₂₄ makes this pairing vanish
        let e = Form::basis(4, &[3, 1]).add(&Form::basis(4, &[4, 2]));
        let c = Cycle::basis(4, &[1, 3]).add(&Cycle::basis(4, &[2, 4]).neg());
        assert_eq!(e.pair(&c).unwrap(), rat(0));
    }

    #[test]
    fn pairing_antisymmetry_oracle() {
        // ⟨σ₄₂, L₂₄⟩ = −⟨σ₂₄, L₂₄⟩ = −1
        let f = Form::basis(4, &[4, 2]);
        let c = Cycle::basis(4, &[2, 4]);
        assert_eq!(f.pair(&c).unwrap(), rat(-1));
    }

    #[test]
    fn pairing_degree_mismatch_errors() {
        let f = Form::basis(4, &[1, 2]);
        let c = Cycle::basis(4, &[1]);
        assert!(f.pair(&c).is_err());
    }

    #[test]
    fn annihilator_of_s42() {
        let e = Form::basis(4, &[4, 2]);
        let ann = annihilator(&[e], 4, 2);
        assert_eq!(ann.dim(), 5);
        // contains L₁₂, L₁₃, L₁₄, L₂₃, L₃₄ but not L₂₄
        for pair in [[1, 2], [1, 3], [1, 4], [2, 3], [3, 4]] {
            let v = Cycle::basis(4, &pair).coefficients();
            assert!(ann.member(&v).unwrap(), "L{pair:?} should annihilate");
        }
        let v = Cycle::basis(4, &[2, 4]).coefficients();
        assert!(!ann.member(&v).unwrap());
    }

    #[test]
    fn annihilator_of_s2_s4_in_degree_one() {
        let f2 = Form::basis(4, &[2]);
        let f4 = Form::basis(4, &[4]);
        let ann = annihilator(&[f2, f4], 4, 1);
        assert_eq!(ann.dim(), 2);
        assert!(ann.member(&Cycle::basis(4, &[1]).coefficients()).unwrap());
        assert!(ann.member(&Cycle::basis(4, &[3]).coefficients()).unwrap());
    }

    #[test]
    fn annihilator_of_empty_list_is_full() {
        let ann = annihilator(&[], 4, 2);
        assert_eq!(ann.dim(), 6);
    }

    #[test]
    fn wedge_map_zero_euler() {
        let e = Form::zero(4, 2);
        let m = wedge_map_matrix(&e, 1);
        assert_eq!(m.rank(), 0);
    }

    #[test]
    fn wedge_map_minus_s42_degree_one() {
        let e = Form::basis(4, &[4, 2]).neg();
        let m = wedge_map_matrix(&e, 1);
        assert_eq!(m.rank(), 2);
        let ker = m.kernel_basis();
        assert_eq!(ker.dim(), 2);
        assert!(ker.member(&Cycle::basis(4, &[2]).coefficients()).unwrap());
        assert!(ker.member(&Cycle::basis(4, &[4]).coefficients()).unwrap());
    }

    #[test]
    fn wedge_map_mixed_euler_class_has_trivial_kernel() {
        let e = Form::basis(4, &[3, 1]).add(&Form::basis(4, &[4, 2]));
        let m = wedge_map_matrix(&e, 1);
        assert_eq!(m.rank(), 4);
        assert_eq!(m.kernel_basis().dim(), 0);
    }

    #[test]
    fn image_of_wedge_from_degree_zero() {
        // e∧ : Λ⁰ → Λ² has image spanned by e itself
        let e = Form::basis(4, &[4, 2]).neg();
        let m = wedge_map_matrix(&e, 0);
        let img = m.image_basis();
        assert_eq!(img.dim(), 1);
        assert!(img.member(&e.coefficients()).unwrap());
        let e2 = Form::basis(4, &[3, 1]).add(&Form::basis(4, &[4, 2]));
        let img2 = wedge_map_matrix(&e2, 0).image_basis();
        assert!(img2.member(&e2.coefficients()).unwrap());
        assert_eq!(img2.dim(), 1);
    }

    #[test]
    fn parse_and_render_forms() {
        let e = parse_form("-s31-s42", 4, 2).unwrap();
        let canonical = Form::basis(4, &[1, 3]).add(&Form::basis(4, &[2, 4]));
        assert_eq!(e, canonical);
        assert_eq!(e.render(), "s13+s24");
        assert_eq!(parse_form("0", 4, 2).unwrap(), Form::zero(4, 2));
        assert_eq!(parse_form("2s12", 4, 2).unwrap().render(), "2s12");
        assert!(parse_form("s12.5", 4, 2).is_err());
        assert!(parse_form("x12", 4, 2).is_err());
    }

    #[test]
    fn parse_cycles() {
        let c = parse_cycle("L13-L24", 4, 2).unwrap();
        let expected = Cycle::basis(4, &[1, 3]).add(&Cycle::basis(4, &[2, 4]).neg());
        assert_eq!(c, expected);
        assert_eq!(c.render(), "L13-L24");
        assert_eq!(
            parse_cycle("L42", 4, 2).unwrap(),
            Cycle::basis(4, &[2, 4]).neg()
        );
    }

    #[test]
    fn annihilator_echelon_order_for_mixed_class() {
        let e = Form::basis(4, &[3, 1]).add(&Form::basis(4, &[4, 2])).neg();
        let ann = annihilator(&[e], 4, 2);
        let basis = tuple_basis(4, 2);
        let rendered: Vec<String> = ann
            .basis()
            .iter()
            .map(|v| Cycle::from_coefficients(4, 2, v).render())
            .collect();
        assert_eq!(basis.len(), 6);
        assert_eq!(rendered, vec!["L12", "L13-L24", "L14", "L23", "L34"]);
    }
}
