//! Sturm-sequence machinery over any ordered domain with exact signs.
//!
//! Two domains are used: the rationals themselves, and `Q(alpha)` for a real
//! algebraic `alpha` (see [`AlgebraicPoint`](super::AlgebraicPoint)), which
//! is what cylindrical decomposition needs above irrational base points.
//! Remainder sequences are computed with pseudo-division and a sign
//! correction, so they are positive multiples of the true signed remainder
//! sequence and keep the Sturm property without needing inverses.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::scalar::Sign;
use crate::Rational;

/// Ring with exact sign determination and an embedding of the rationals.
pub(crate) trait Domain {
    type Elem: Clone + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn from_rational(&self, r: &Rational) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sign(&self, a: &Self::Elem) -> Sign;

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }

    fn one(&self) -> Self::Elem {
        self.from_rational(&Rational::one())
    }

    /// Divides every coefficient by a common positive scalar to keep them
    /// small; must not change signs.
    fn normalize(&self, _p: &mut [Self::Elem]) {}

    /// A rational `B` with every real root inside `(-B, B)`, if cheaply known.
    fn root_bound(&self, _p: &[Self::Elem]) -> Option<Rational> {
        None
    }
}

/// The rationals as a [`Domain`].
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct RationalField;

impl Domain for RationalField {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn from_rational(&self, r: &Rational) -> Rational {
        r.clone()
    }
    fn add(&self, a: &Rational, b: &Rational) -> Rational {
        a + b
    }
    fn sub(&self, a: &Rational, b: &Rational) -> Rational {
        a - b
    }
    fn mul(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }
    fn sign(&self, a: &Rational) -> Sign {
        Sign::of(a)
    }
    fn normalize(&self, p: &mut [Rational]) {
        if let Some(l) = p.last().map(Rational::abs) {
            if !l.is_zero() {
                for c in p.iter_mut() {
                    *c = &*c / &l;
                }
            }
        }
    }
    fn root_bound(&self, p: &[Rational]) -> Option<Rational> {
        // Cauchy: 1 + max |a_i| / |a_n|, rounded up to a power of two so
        // that bisection points stay dyadic.
        let lead = p.last()?.abs();
        let m = p[..p.len() - 1].iter().map(Rational::abs).max().unwrap_or_else(Rational::zero);
        let cauchy = Rational::one() + m / lead;
        let mut b = Rational::one();
        while b < cauchy {
            b *= Rational::from_integer(2.into());
        }
        Some(b)
    }
}

/// Isolating bracket of a real root: `low == high` marks an exact rational
/// root, otherwise the root lies strictly inside and neither endpoint is a
/// root of the square-free polynomial the bracket belongs to.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Bracket {
    pub low: Rational,
    pub high: Rational,
}

impl Bracket {
    pub fn point(r: Rational) -> Self {
        Bracket { low: r.clone(), high: r }
    }
    pub fn is_point(&self) -> bool {
        self.low == self.high
    }
}

pub(crate) struct Engine<'a, D: Domain> {
    pub dom: &'a D,
}

impl<'a, D: Domain> Engine<'a, D> {
    pub fn new(dom: &'a D) -> Self {
        Engine { dom }
    }

    /// Drops leading coefficients that vanish in the domain.
    pub fn trim(&self, p: &mut Vec<D::Elem>) {
        while let Some(c) = p.last() {
            if self.dom.sign(c) == Sign::Zero {
                p.pop();
            } else {
                break;
            }
        }
    }

    pub fn trimmed(&self, p: &[D::Elem]) -> Vec<D::Elem> {
        let mut v = p.to_vec();
        self.trim(&mut v);
        v
    }

    pub fn eval(&self, p: &[D::Elem], x: &Rational) -> D::Elem {
        let xe = self.dom.from_rational(x);
        p.iter()
            .rev()
            .fold(self.dom.zero(), |acc, c| self.dom.add(&self.dom.mul(&acc, &xe), c))
    }

    pub fn sign_at(&self, p: &[D::Elem], x: &Rational) -> Sign {
        self.dom.sign(&self.eval(p, x))
    }

    pub fn derivative(&self, p: &[D::Elem]) -> Vec<D::Elem> {
        let mut d: Vec<D::Elem> = p
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.dom.mul(c, &self.dom.from_rational(&Rational::from_integer(i.into()))))
            .collect();
        self.trim(&mut d);
        d
    }

    pub fn mul_poly(&self, a: &[D::Elem], b: &[D::Elem]) -> Vec<D::Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.dom.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = self.dom.add(&out[i + j], &self.dom.mul(x, y));
            }
        }
        self.trim(&mut out);
        out
    }

    /// Pseudo-division `lc(b)^e a = q b + r`, `e = deg a - deg b + 1`.
    /// Returns `(q, r, e)`; both inputs must be trimmed and `b` nonzero.
    fn pseudo_div(&self, a: &[D::Elem], b: &[D::Elem]) -> (Vec<D::Elem>, Vec<D::Elem>, usize) {
        let db = b.len() - 1;
        let lb = b[db].clone();
        let mut r = a.to_vec();
        if r.len() < b.len() {
            return (Vec::new(), r, 0);
        }
        let e0 = r.len() - db;
        let mut q = vec![self.dom.zero(); e0];
        let mut e = e0;
        while r.len() > db && !r.is_empty() {
            let k = r.len() - 1 - db;
            let lr = r.last().unwrap().clone();
            for c in q.iter_mut() {
                *c = self.dom.mul(c, &lb);
            }
            q[k] = self.dom.add(&q[k], &lr);
            for c in r.iter_mut() {
                *c = self.dom.mul(c, &lb);
            }
            for (i, bc) in b.iter().enumerate() {
                r[k + i] = self.dom.sub(&r[k + i], &self.dom.mul(&lr, bc));
            }
            r.pop();
            self.trim(&mut r);
            e -= 1;
        }
        for _ in 0..e {
            for c in q.iter_mut() {
                *c = self.dom.mul(c, &lb);
            }
            for c in r.iter_mut() {
                *c = self.dom.mul(c, &lb);
            }
        }
        (q, r, e0)
    }

    /// Positive multiple of the remainder of `a` by `b`.
    fn positive_rem(&self, a: &[D::Elem], b: &[D::Elem]) -> Vec<D::Elem> {
        let (_, mut r, e) = self.pseudo_div(a, b);
        if self.dom.sign(b.last().unwrap()).pow(e) == Sign::Negative {
            r = r.iter().map(|c| self.dom.neg(c)).collect();
        }
        self.dom.normalize(&mut r);
        r
    }

    /// Positive multiple of the exact quotient `a / b`.
    pub fn positive_quo(&self, a: &[D::Elem], b: &[D::Elem]) -> Vec<D::Elem> {
        let (mut q, r, e) = self.pseudo_div(a, b);
        debug_assert!(r.is_empty(), "quotient is expected to be exact");
        if self.dom.sign(b.last().unwrap()).pow(e) == Sign::Negative {
            q = q.iter().map(|c| self.dom.neg(c)).collect();
        }
        self.trim(&mut q);
        self.dom.normalize(&mut q);
        q
    }

    /// Sturm sequence `p, p', -rem, ...` up to positive factors.
    pub fn sturm(&self, p: &[D::Elem]) -> Vec<Vec<D::Elem>> {
        let p = self.trimmed(p);
        if p.is_empty() {
            return Vec::new();
        }
        let mut seq = vec![p.clone()];
        let d = self.derivative(&p);
        if d.is_empty() {
            return seq;
        }
        seq.push(d);
        loop {
            let n = seq.len();
            let r = self.positive_rem(&seq[n - 2], &seq[n - 1]);
            if r.is_empty() {
                break;
            }
            seq.push(r.iter().map(|c| self.dom.neg(c)).collect());
        }
        seq
    }

    /// A gcd of `a` and `b` (up to a nonzero factor).
    pub fn gcd(&self, a: &[D::Elem], b: &[D::Elem]) -> Vec<D::Elem> {
        let mut a = self.trimmed(a);
        let mut b = self.trimmed(b);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            let r = self.positive_rem(&a, &b);
            a = b;
            b = r;
        }
        a
    }

    pub fn square_free(&self, p: &[D::Elem]) -> Vec<D::Elem> {
        let p = self.trimmed(p);
        let d = self.derivative(&p);
        if d.is_empty() {
            return p;
        }
        let g = self.gcd(&p, &d);
        if g.len() <= 1 {
            let mut p = p;
            self.dom.normalize(&mut p);
            return p;
        }
        self.positive_quo(&p, &g)
    }

    fn variations_of(signs: impl Iterator<Item = Sign>) -> usize {
        let mut last = Sign::Zero;
        let mut count = 0;
        for s in signs {
            if s == Sign::Zero {
                continue;
            }
            if last != Sign::Zero && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations(&self, seq: &[Vec<D::Elem>], x: &Rational) -> usize {
        Self::variations_of(seq.iter().map(|p| self.sign_at(p, x)))
    }

    fn variations_at_infinity(&self, seq: &[Vec<D::Elem>], positive: bool) -> usize {
        Self::variations_of(seq.iter().map(|p| {
            let s = self.dom.sign(p.last().unwrap());
            if positive || (p.len() - 1) % 2 == 0 {
                s
            } else {
                s.flip()
            }
        }))
    }

    /// Number of distinct real roots of the square-free `p` whose Sturm
    /// sequence is `seq`.
    pub fn total_roots(&self, seq: &[Vec<D::Elem>]) -> usize {
        if seq.is_empty() {
            return 0;
        }
        self.variations_at_infinity(seq, false) - self.variations_at_infinity(seq, true)
    }

    /// Isolating brackets for the real roots of a square-free polynomial,
    /// in increasing order.
    pub fn isolate(&self, sqf: &[D::Elem]) -> Vec<Bracket> {
        let seq = self.sturm(sqf);
        let total = self.total_roots(&seq);
        if total == 0 {
            return Vec::new();
        }
        let bound = match self.dom.root_bound(sqf) {
            Some(b) => b,
            None => {
                let mut b = Rational::one();
                loop {
                    let nb = -b.clone();
                    if self.variations(&seq, &nb) - self.variations(&seq, &b) == total
                        && self.sign_at(sqf, &b) != Sign::Zero
                    {
                        break b;
                    }
                    b *= Rational::from_integer(2.into());
                }
            }
        };
        let low = -bound.clone();
        let vl = self.variations(&seq, &low);
        let vh = self.variations(&seq, &bound);
        let mut out = Vec::with_capacity(total);
        self.isolate_in(sqf, &seq, low, vl, bound, vh, &mut out);
        debug_assert_eq!(out.len(), total);
        out
    }

    /// Roots in the half-open `(a, b]`; `va`, `vb` are the sign variations
    /// at the endpoints, so `va - vb` counts them.
    #[allow(clippy::too_many_arguments)]
    fn isolate_in(
        &self,
        sqf: &[D::Elem],
        seq: &[Vec<D::Elem>],
        a: Rational,
        va: usize,
        b: Rational,
        vb: usize,
        out: &mut Vec<Bracket>,
    ) {
        let count = va - vb;
        if count == 0 {
            return;
        }
        if count == 1 {
            if self.sign_at(sqf, &b) == Sign::Zero {
                out.push(Bracket::point(b));
                return;
            }
            if self.sign_at(sqf, &a) != Sign::Zero {
                out.push(Bracket { low: a, high: b });
                return;
            }
        }
        let m = (&a + &b) / Rational::from_integer(2.into());
        let vm = self.variations(seq, &m);
        self.isolate_in(sqf, seq, a, va, m.clone(), vm, out);
        self.isolate_in(sqf, seq, m, vm, b, vb, out);
    }

    /// One bisection step.
    pub fn refine(&self, sqf: &[D::Elem], br: &mut Bracket) {
        if br.is_point() {
            return;
        }
        let m = (&br.low + &br.high) / Rational::from_integer(2.into());
        let sm = self.sign_at(sqf, &m);
        if sm == Sign::Zero {
            *br = Bracket::point(m);
        } else if sm == self.sign_at(sqf, &br.low) {
            br.low = m;
        } else {
            br.high = m;
        }
    }

    /// Refines adjacent brackets (sorted, of distinct roots) until each
    /// ends strictly before the next begins.
    pub fn separate(&self, sqf: &[D::Elem], brs: &mut [Bracket]) {
        for i in 1..brs.len() {
            while brs[i - 1].high >= brs[i].low {
                let (l, r) = brs.split_at_mut(i);
                let (a, b) = (&mut l[i - 1], &mut r[0]);
                if !a.is_point() && (b.is_point() || (&a.high - &a.low) >= (&b.high - &b.low)) {
                    self.refine(sqf, a);
                } else {
                    self.refine(sqf, b);
                }
            }
        }
    }

    pub fn refine_to_width(&self, sqf: &[D::Elem], br: &mut Bracket, width: &Rational) {
        while !br.is_point() && &(&br.high - &br.low) > width {
            self.refine(sqf, br);
        }
    }

    /// Sign of `q` at the root of `sqf` isolated by `br`. Zero is decided
    /// with a gcd, nonzero signs by refining until `q` has no root left in
    /// the bracket.
    pub fn sign_at_root(&self, q: &[D::Elem], sqf: &[D::Elem], br: &mut Bracket) -> Sign {
        let q = self.trimmed(q);
        if br.is_point() {
            return self.sign_at(&q, &br.low);
        }
        match q.len() {
            0 => return Sign::Zero,
            1 => return self.dom.sign(&q[0]),
            _ => {}
        }
        let g = self.gcd(sqf, &q);
        if g.len() > 1 {
            let gs = self.sturm(&g);
            if self.variations(&gs, &br.low) > self.variations(&gs, &br.high) {
                return Sign::Zero;
            }
        }
        let qs = self.sturm(&q);
        loop {
            let sl = self.sign_at(&q, &br.low);
            let sh = self.sign_at(&q, &br.high);
            if sl != Sign::Zero && sh != Sign::Zero && self.variations(&qs, &br.low) == self.variations(&qs, &br.high) {
                return sl;
            }
            self.refine(sqf, br);
            if br.is_point() {
                return self.sign_at(&q, &br.low);
            }
        }
    }

    /// Orders the root isolated by `br` against the rational `r`.
    pub fn compare_root(&self, sqf: &[D::Elem], br: &mut Bracket, r: &Rational) -> Ordering {
        loop {
            if br.is_point() {
                return br.low.cmp(r);
            }
            if r <= &br.low {
                return Ordering::Greater;
            }
            if r >= &br.high {
                return Ordering::Less;
            }
            let sr = self.sign_at(sqf, r);
            if sr == Sign::Zero {
                return Ordering::Equal;
            }
            if sr == self.sign_at(sqf, &br.low) {
                br.low = r.clone();
            } else {
                br.high = r.clone();
            }
        }
    }
}

/// One rational sample per gap of separated brackets: below the first,
/// between consecutive ones, and above the last (`0` when there are none).
pub fn gap_samples(brs: &[Bracket]) -> Vec<Rational> {
    let (Some(first), Some(last)) = (brs.first(), brs.last()) else {
        return vec![Rational::zero()];
    };
    let mut out = Vec::with_capacity(brs.len() + 1);
    out.push(first.low.floor() - Rational::one());
    for w in brs.windows(2) {
        out.push(simplest_between(&w[0].high, &w[1].low));
    }
    out.push(last.high.ceil() + Rational::one());
    out
}

/// Simplest rational (smallest denominator, then smallest magnitude) in the
/// open interval `(a, b)`.
pub fn simplest_between(a: &Rational, b: &Rational) -> Rational {
    assert!(a < b, "empty interval");
    if a.is_negative() && b.is_positive() {
        return Rational::zero();
    }
    if !b.is_positive() {
        return -simplest_between(&-b, &-a);
    }
    // 0 <= a < b
    let n = a.floor();
    if &(&n + Rational::one()) < b {
        return n + Rational::one();
    }
    let fa = a - &n;
    let fb = b - &n;
    let inner = if fa.is_zero() {
        (Rational::one() / &fb).floor() + Rational::one()
    } else {
        simplest_between(&(Rational::one() / &fb), &(Rational::one() / &fa))
    };
    n + Rational::one() / inner
}
