//! Sample points in primitive-element form: every coordinate is a polynomial in
//! one real algebraic number θ, given by a squarefree m(t) and an isolating interval.

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::lift::CadOptions;
use super::mpoly::{first_subresultant_q, interpolate, MPoly};
use super::roots::{descartes_count, isolate, Root};
use crate::algebra::rat::{self, q, Q};
use crate::algebra::upoly::UPoly;
use crate::error::Result;

/// ℚ(θ) with θ the unique root of `m` in the open interval (lo, hi).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Field {
    pub m: UPoly,
    pub lo: Q,
    pub hi: Q,
}

impl Field {
    /// θ = r.
    pub fn rational(r: Q) -> Field {
        Field { m: UPoly::linear_root(&r), lo: &r - q(1), hi: &r + q(1) }
    }

    pub fn from_root(p: &UPoly, root: &Root) -> Field {
        match root {
            Root::Exact(r) => Field::rational(r.clone()),
            Root::Interval(a, b) => Field { m: p.squarefree(), lo: a.clone(), hi: b.clone() },
        }
    }

    pub fn is_rational(&self) -> bool {
        self.m.degree() == 1
    }

    pub fn rational_value(&self) -> Option<Q> {
        if self.is_rational() {
            Some(-self.m.coeff(0) / self.m.coeff(1))
        } else {
            None
        }
    }

    pub fn degree(&self) -> usize {
        self.m.degree()
    }

    pub fn refine(&mut self) {
        if self.is_rational() {
            let r = self.rational_value().unwrap();
            self.lo = rat::midpoint(&self.lo, &r);
            self.hi = rat::midpoint(&self.hi, &r);
            return;
        }
        let mid = rat::midpoint(&self.lo, &self.hi);
        let s = self.m.sign_at(&mid);
        if s == 0 {
            *self = Field::rational(mid);
        } else if s == self.m.sign_at(&self.lo) {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    pub fn reduce(&self, h: &UPoly) -> UPoly {
        if h.degree() < self.m.degree() || h.is_zero() {
            h.clone()
        } else {
            h.rem(&self.m)
        }
    }

    /// Interval enclosure of h(θ) over the current isolating interval.
    pub fn enclose(&self, h: &UPoly) -> (Q, Q) {
        if let Some(r) = self.rational_value() {
            let v = h.eval(&r);
            return (v.clone(), v);
        }
        let (a, b) = (&self.lo, &self.hi);
        let mut lo = Q::zero();
        let mut hi = Q::zero();
        for c in h.coeffs().iter().rev() {
            // [lo, hi] * [a, b] + c
            let ps = [&lo * a, &lo * b, &hi * a, &hi * b];
            let mn = ps.iter().min().unwrap().clone();
            let mx = ps.iter().max().unwrap().clone();
            lo = mn + c;
            hi = mx + c;
        }
        (lo, hi)
    }

    /// Decides h(θ) = 0, splitting `m` by the gcd when h shares a factor with it.
    pub fn is_zero(&mut self, h: &UPoly) -> bool {
        let h = self.reduce(h);
        if h.is_zero() {
            return true;
        }
        if let Some(r) = self.rational_value() {
            return h.eval(&r).is_zero();
        }
        let g = self.m.gcd(&h);
        if g.degree() == 0 {
            return false;
        }
        let other = self.m.divrem(&g).0;
        if g.sign_at(&self.lo) * g.sign_at(&self.hi) < 0 {
            self.set_poly(g);
            true
        } else {
            self.set_poly(other);
            false
        }
    }

    fn set_poly(&mut self, m: UPoly) {
        let m = m.primitive();
        if m.degree() == 1 {
            let r = -m.coeff(0) / m.coeff(1);
            *self = Field::rational(r);
        } else {
            self.m = m;
        }
    }

    /// Sign of h(θ).
    pub fn sign(&mut self, h: &UPoly) -> i32 {
        if self.is_zero(h) {
            return 0;
        }
        let h = self.reduce(h);
        if let Some(r) = self.rational_value() {
            return rat::sign(&h.eval(&r));
        }
        loop {
            let (lo, hi) = self.enclose(&h);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            self.refine();
            if let Some(r) = self.rational_value() {
                return rat::sign(&h.eval(&r));
            }
        }
    }

    /// h(a(θ)) mod m.
    pub fn compose(&self, h: &UPoly, a: &UPoly) -> UPoly {
        let mut acc = UPoly::zero();
        for c in h.coeffs().iter().rev() {
            acc = self.reduce(&(&(&acc * a) + &UPoly::constant(c.clone())));
        }
        acc
    }

    /// Inverse of h(θ) ≠ 0 in ℚ(θ).
    pub fn inverse(&mut self, h: &UPoly) -> UPoly {
        assert!(!self.is_zero(h), "inverse of zero");
        // is_zero has split off any common factor of m and h
        let hr = self.reduce(h);
        // half-extended Euclid on primitive remainders: s·h ≡ r (mod m)
        let (mut r0, mut r1) = (self.m.clone(), hr);
        let (mut s0, mut s1) = (UPoly::zero(), UPoly::one());
        while r1.degree() > 0 {
            let (qq, r) = r0.divrem(&r1);
            let s2 = &s0 - &(&qq * &s1);
            assert!(!r.is_zero(), "m and h are coprime");
            let p = r.primitive();
            let f = r.lc() / p.lc();
            r0 = r1;
            s0 = s1;
            r1 = p;
            s1 = s2.scale(&(Q::one() / f));
        }
        self.reduce(&s1.scale(&(Q::one() / r1.lc())))
    }
}

/// A point of ℝ^k given as polynomials in the primitive element of `field`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplePoint {
    pub field: Field,
    pub coords: Vec<UPoly>,
}

impl SamplePoint {
    pub fn origin() -> SamplePoint {
        SamplePoint { field: Field::rational(Q::zero()), coords: vec![] }
    }

    pub fn rational(values: &[Q]) -> SamplePoint {
        SamplePoint { field: Field::rational(Q::zero()), coords: values.iter().map(|v| UPoly::constant(v.clone())).collect() }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Rational coordinates, if every coordinate is rational.
    pub fn rational_coords(&self) -> Option<Vec<Q>> {
        let theta = self.field.rational_value();
        self.coords
            .iter()
            .map(|c| {
                if c.degree() == 0 || c.is_zero() {
                    Some(c.coeff(0))
                } else {
                    theta.as_ref().map(|t| c.eval(t))
                }
            })
            .collect()
    }

    /// Normalizes coordinates after the field shrank.
    pub fn tidy(&mut self) {
        let f = self.field.clone();
        if let Some(r) = f.rational_value() {
            for c in self.coords.iter_mut() {
                *c = UPoly::constant(c.eval(&r));
            }
            self.field = Field::rational(r);
        } else {
            for c in self.coords.iter_mut() {
                *c = f.reduce(c);
            }
        }
    }

    /// p(point) as a polynomial in θ, for p using variables < len.
    pub fn substitute(&self, p: &MPoly) -> UPoly {
        let mut acc = UPoly::zero();
        for (m, c) in p.terms() {
            let mut t = UPoly::constant(c.clone());
            for (v, e) in m.pairs() {
                for _ in 0..*e {
                    t = self.field.reduce(&(&t * &self.coords[*v]));
                }
            }
            acc = &acc + &t;
        }
        self.field.reduce(&acc)
    }

    pub fn sign(&mut self, p: &MPoly) -> i32 {
        let h = self.substitute(p);
        let s = self.field.sign(&h);
        self.tidy();
        s
    }

    /// Extends by one rational coordinate.
    pub fn push_rational(&self, r: &Q) -> SamplePoint {
        let mut out = self.clone();
        out.coords.push(UPoly::constant(r.clone()));
        out
    }

    /// Interval enclosure of coordinate i.
    pub fn enclose_coord(&self, i: usize) -> (Q, Q) {
        self.field.enclose(&self.coords[i])
    }

    /// The coordinate i as a standalone real algebraic number.
    pub fn coord_value(&self, i: usize) -> RealAlg {
        let c = &self.coords[i];
        if c.degree() == 0 || c.is_zero() {
            return RealAlg::Rational(c.coeff(0));
        }
        let mut f = self.field.clone();
        if let Some(r) = f.rational_value() {
            return RealAlg::Rational(c.eval(&r));
        }
        // minimal-polynomial candidate: norm of z - c(t)
        let norm = norm_of(&f.m, c).squarefree();
        let roots = isolate(&norm);
        loop {
            let (lo, hi) = f.enclose(c);
            let hits: Vec<&Root> = roots.iter().filter(|r| !(r.hi() < &lo || r.lo() > &hi)).collect();
            if hits.len() == 1 {
                match hits[0] {
                    Root::Exact(v) => {
                        let mut g = f.clone();
                        if g.is_zero(&(c - &UPoly::constant(v.clone()))) {
                            return RealAlg::Rational(v.clone());
                        }
                    }
                    Root::Interval(a, b) => {
                        if &lo > a && &hi < b {
                            return RealAlg::Algebraic { poly: norm.primitive(), lo: a.clone(), hi: b.clone() };
                        }
                    }
                }
            }
            f.refine();
            if let Some(r) = f.rational_value() {
                return RealAlg::Rational(c.eval(&r));
            }
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array((0..self.len()).map(|i| self.coord_value(i).to_json()).collect())
    }
}

/// Res_t(m(t), z - c(t)) / lc(m)^deg: a polynomial in z vanishing at c(θ).
pub fn norm_of(m: &UPoly, c: &UPoly) -> UPoly {
    let mm = m.monic();
    let deg = m.degree();
    interpolate(deg, |z| {
        let h = &UPoly::constant(z.clone()) - c;
        UPoly::resultant(&mm, &h)
    })
}

/// Standalone real algebraic number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealAlg {
    Rational(Q),
    Algebraic { poly: UPoly, lo: Q, hi: Q },
}

impl RealAlg {
    pub fn to_json(&self) -> Value {
        match self {
            RealAlg::Rational(r) => {
                let p = UPoly::linear_root(r).primitive();
                json!({"poly": upoly_text(&p), "interval": [rat::render(r), rat::render(r)]})
            }
            RealAlg::Algebraic { poly, lo, hi } => {
                json!({"poly": upoly_text(poly), "interval": [rat::render(lo), rat::render(hi)]})
            }
        }
    }

    pub fn approx(&self) -> f64 {
        use num_traits::ToPrimitive;
        match self {
            RealAlg::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            RealAlg::Algebraic { lo, hi, .. } => rat::midpoint(lo, hi).to_f64().unwrap_or(f64::NAN),
        }
    }
}

pub fn upoly_text(p: &UPoly) -> String {
    crate::formula::render::poly_to_string(&p.to_poly(&"x".to_string()))
}

/// Roots of the univariate polynomials `polys` (coefficients in θ, given as
/// dense vectors of polynomials in t) over a sample point, as extended sample
/// points in increasing order. Each polynomial is P(t, y) = Σ coeff_k(t) y^k.
pub fn lift_roots(base: &SamplePoint, polys: &[Vec<UPoly>], opts: &CadOptions) -> Result<Vec<SamplePoint>> {
    let mut field = base.field.clone();
    // drop vanishing top coefficients and identically vanishing polynomials
    let mut live: Vec<Vec<UPoly>> = Vec::new();
    for p in polys {
        let mut p: Vec<UPoly> = p.iter().map(|c| field.reduce(c)).collect();
        while let Some(top) = p.last() {
            if field.is_zero(top) {
                p.pop();
            } else {
                break;
            }
        }
        if p.len() >= 2 {
            live.push(p);
        }
    }
    let mut base = SamplePoint { field: field.clone(), coords: base.coords.clone() };
    base.tidy();
    let field = base.field.clone();
    let live: Vec<Vec<UPoly>> = live.into_iter().map(|p| p.iter().map(|c| field.reduce(c)).collect()).collect();
    if live.is_empty() {
        return Ok(vec![]);
    }
    if let Some(r) = field.rational_value() {
        let mut prod = UPoly::one();
        let mut factors = Vec::new();
        for p in &live {
            let u = UPoly::new(p.iter().map(|c| c.eval(&r)).collect()).squarefree();
            prod = &prod * &u;
            factors.push(u);
        }
        let sq = prod.squarefree();
        return Ok(isolate(&sq)
            .into_iter()
            .map(|root| match root {
                Root::Exact(v) => base.push_rational(&v),
                Root::Interval(a, b) => {
                    let mut coords: Vec<UPoly> = base.coords.iter().map(|c| UPoly::constant(c.coeff(0))).collect();
                    coords.push(UPoly::x());
                    SamplePoint { field: Field { m: narrowest(&factors, &sq, &a, &b), lo: a, hi: b }, coords }
                }
            })
            .collect());
    }
    // algebraic base: candidate roots from norms
    let mm = field.m.monic();
    let dm = field.m.degree();
    let mut prod = UPoly::one();
    let mut factors = Vec::new();
    for p in &live {
        opts.check_time(|| "lifting over an algebraic sample".into())?;
        let dy = p.len() - 1;
        let n = interpolate(dm * dy, |y| {
            let mut h = UPoly::zero();
            for c in p.iter().rev() {
                h = &h.scale(y) + c;
            }
            UPoly::resultant(&mm, &h)
        });
        if !n.is_zero() {
            let n = n.squarefree();
            prod = &prod * &n;
            factors.push(n);
        }
    }
    let sq = prod.squarefree();
    let mut out = Vec::new();
    for root in isolate(&sq) {
        let m = match &root {
            Root::Exact(_) => sq.clone(),
            Root::Interval(a, b) => narrowest(&factors, &sq, a, b),
        };
        if let Some(pt) = confirm_root(&base, &live, &m, &root, opts)? {
            out.push(pt);
        }
    }
    Ok(out)
}

/// The lowest-degree factor with a root in (a, b), where `sq` isolates a
/// single root there and every factor divides a power of `sq`.
fn narrowest(factors: &[UPoly], sq: &UPoly, a: &Q, b: &Q) -> UPoly {
    factors
        .iter()
        .filter(|f| f.degree() > 0 && f.sign_at(a) * f.sign_at(b) < 0)
        .min_by_key(|f| f.degree())
        .cloned()
        .unwrap_or_else(|| sq.clone())
}

fn eval_poly_in_y(p: &[UPoly], y: &UPoly, f: &Field) -> UPoly {
    let mut h = UPoly::zero();
    for c in p.iter().rev() {
        h = f.reduce(&(&(&h * y) + c));
    }
    h
}

/// Checks whether the candidate β (a root of `sq`) is a root of some P(θ, ·),
/// returning the extended sample point.
fn confirm_root(base: &SamplePoint, live: &[Vec<UPoly>], sq: &UPoly, root: &Root, opts: &CadOptions) -> Result<Option<SamplePoint>> {
    match root {
        Root::Exact(b) => {
            let mut pt = base.clone();
            let y = UPoly::constant(b.clone());
            let hit = live.iter().any(|p| {
                let h = eval_poly_in_y(p, &y, &pt.field);
                pt.field.is_zero(&h)
            });
            if hit {
                pt.tidy();
                Ok(Some(pt.push_rational(b)))
            } else {
                Ok(None)
            }
        }
        Root::Interval(a, b) => {
            let beta = Field { m: sq.clone(), lo: a.clone(), hi: b.clone() };
            if interval_excludes(base, live, &beta) {
                return Ok(None);
            }
            let mut j = join(&base.field, &beta, opts)?;
            let hit = live.iter().any(|p| {
                let lifted: Vec<UPoly> = p.iter().map(|c| j.field.compose(c, &j.theta)).collect();
                let h = eval_poly_in_y(&lifted, &j.beta, &j.field);
                j.field.is_zero(&h)
            });
            if !hit {
                return Ok(None);
            }
            let mut coords: Vec<UPoly> = base.coords.iter().map(|c| j.field.compose(c, &j.theta)).collect();
            coords.push(j.field.reduce(&j.beta));
            let mut pt = SamplePoint { field: j.field, coords };
            pt.tidy();
            Ok(Some(pt))
        }
    }
}

/// ℚ(θ, β) = ℚ(γ) with θ = theta(γ), β = beta(γ).
pub struct Joined {
    pub field: Field,
    pub theta: UPoly,
    pub beta: UPoly,
}

/// Primitive element γ = β + kθ for the smallest admissible shift k.
pub fn join(theta: &Field, beta: &Field, opts: &CadOptions) -> Result<Joined> {
    if let Some(r) = theta.rational_value() {
        return Ok(Joined { field: beta.clone(), theta: UPoly::constant(r), beta: UPoly::x() });
    }
    if let Some(r) = beta.rational_value() {
        return Ok(Joined { field: theta.clone(), theta: UPoly::x(), beta: UPoly::constant(r) });
    }
    let m = theta.m.monic();
    let n = beta.m.clone();
    let deg = m.degree() * n.degree();
    for step in 1..64i64 {
        opts.check_time(|| format!("primitive element of degree {deg}"))?;
        let k = if step % 2 == 1 { q((step + 1) / 2) } else { q(-step / 2) };
        let shifted = |z: &Q| n.compose_linear(z, &-k.clone());
        let r = interpolate(deg, |z| UPoly::resultant(&m, &shifted(z)));
        if !r.is_squarefree() {
            continue;
        }
        let s0 = interpolate(deg, |z| first_subresultant_q(&m, &shifted(z)).0);
        let s1 = interpolate(deg, |z| first_subresultant_q(&m, &shifted(z)).1);
        let (mut tf, mut bf) = (theta.clone(), beta.clone());
        let r = r.primitive();
        let (lo, hi) = loop {
            let (tl, th) = if k.is_positive() { (&tf.lo * &k, &tf.hi * &k) } else { (&tf.hi * &k, &tf.lo * &k) };
            let lo = &bf.lo + &tl;
            let hi = &bf.hi + &th;
            if r.sign_at(&lo) != 0 && r.sign_at(&hi) != 0 && descartes_count(&r, &lo, &hi) == 1 {
                break (lo, hi);
            }
            tf.refine();
            bf.refine();
        };
        let mut g = Field { m: r, lo, hi };
        let inv = g.inverse(&s1);
        opts.check_time(|| format!("primitive element of degree {deg}"))?;
        let a = g.reduce(&(&inv * &s0)).scale(&q(-1));
        let a = g.reduce(&a);
        let b = g.reduce(&(&UPoly::x() - &a.scale(&k)));
        return Ok(Joined { field: g, theta: a, beta: b });
    }
    panic!("no primitive element found");
}

/// Quick rejection: interval arithmetic shows P(θ, β) ≠ 0 for every P.
fn interval_excludes(base: &SamplePoint, live: &[Vec<UPoly>], beta: &Field) -> bool {
    let mut f = base.field.clone();
    let mut b = beta.clone();
    for _ in 0..6 {
        let all = live.iter().all(|p| {
            let (lo, hi) = enclose_bivariate(p, &f, &b);
            lo.is_positive() || hi.is_negative()
        });
        if all {
            return true;
        }
        f.refine();
        b.refine();
        if f.is_rational() || b.is_rational() {
            return false;
        }
    }
    false
}

fn enclose_bivariate(p: &[UPoly], f: &Field, b: &Field) -> (Q, Q) {
    let (ya, yb) = (b.lo.clone(), b.hi.clone());
    let mut lo = Q::zero();
    let mut hi = Q::zero();
    for c in p.iter().rev() {
        let (cl, ch) = f.enclose(c);
        let ps = [&lo * &ya, &lo * &yb, &hi * &ya, &hi * &yb];
        let mn = ps.iter().min().unwrap().clone();
        let mx = ps.iter().max().unwrap().clone();
        lo = mn + cl;
        hi = mx + ch;
    }
    (lo, hi)
}
