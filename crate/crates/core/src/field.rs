//! Finite fields F_q, q = p^e, with full addition and multiplication tables.
//!
//! Elements are encoded as integers `0..q` whose base-p digits are the
//! coefficients of the polynomial-basis representation. With this encoding
//! the prime subfield F_p is `0..p`, so prime-field vectors can be read in
//! any extension of F_p without conversion.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order accepted by [`FField::new`].
pub const MAX_FIELD_ORDER: usize = 128;

pub type Elem = u8;

/// Returns `(p, e)` when `q = p^e` for a prime `p`.
pub fn prime_power(q: usize) -> Option<(usize, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

#[derive(Clone)]
struct Tables {
    p: usize,
    e: usize,
    q: usize,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
    /// Generator of the multiplicative group.
    primitive: Elem,
    /// The defining polynomial, low coefficient first, monic of degree e.
    modulus: Vec<usize>,
}

/// A finite field with precomputed tables. Cheap to clone.
#[derive(Clone)]
pub struct FField(Arc<Tables>);

impl fmt::Debug for FField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

impl PartialEq for FField {
    fn eq(&self, other: &Self) -> bool {
        self.0.q == other.0.q
    }
}
impl Eq for FField {}

fn digits(mut a: usize, p: usize, e: usize) -> Vec<usize> {
    let mut out = vec![0; e];
    for d in out.iter_mut() {
        *d = a % p;
        a /= p;
    }
    out
}

fn undigits(ds: &[usize], p: usize) -> usize {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Polynomial product of digit vectors reduced modulo the monic `modulus`.
fn poly_mulmod(a: &[usize], b: &[usize], modulus: &[usize], p: usize) -> Vec<usize> {
    let e = modulus.len() - 1;
    let mut prod = vec![0usize; 2 * e];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (e..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for t in 0..=e {
            let idx = k - e + t;
            prod[idx] = (prod[idx] + (p - c) * modulus[t] % p) % p;
        }
    }
    prod.truncate(e);
    prod
}

/// Multiplicative order of x modulo the candidate polynomial; `None` if x
/// hits zero (the polynomial is reducible with a factor x, or x is nilpotent).
fn order_of_x(modulus: &[usize], p: usize) -> Option<usize> {
    let e = modulus.len() - 1;
    let q = p.pow(e as u32);
    let mut x = vec![0; e];
    if e == 1 {
        // x reduces to -modulus[0]
        x[0] = (p - modulus[0]) % p;
    } else {
        x[1] = 1;
    }
    let one: Vec<usize> = {
        let mut v = vec![0; e];
        v[0] = 1;
        v
    };
    let mut cur = x.clone();
    for k in 1..q {
        if cur.iter().all(|&c| c == 0) {
            return None;
        }
        if cur == one {
            return Some(k);
        }
        cur = poly_mulmod(&cur, &x, modulus, p);
    }
    None
}

impl FField {
    pub fn new(q: usize) -> Result<Self> {
        let (p, e) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge(q));
        }
        // Smallest monic polynomial (by digit encoding of the low coefficients)
        // for which x is primitive.
        let mut modulus = None;
        for low in 0..q {
            let mut m = digits(low, p, e);
            m.push(1);
            if e == 1 && m[0] == 0 {
                continue;
            }
            if order_of_x(&m, p) == Some(q - 1) {
                modulus = Some(m);
                break;
            }
        }
        let modulus = modulus.expect("a primitive polynomial exists for every prime power");
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            let da = digits(a, p, e);
            for b in 0..q {
                let db = digits(b, p, e);
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&s, p) as Elem;
                mul[a * q + b] = undigits(&poly_mulmod(&da, &db, &modulus, p), p) as Elem;
            }
        }
        let mut neg = vec![0; q];
        let mut inv = vec![0; q];
        for a in 0..q {
            for b in 0..q {
                if add[a * q + b] == 0 {
                    neg[a] = b as Elem;
                }
                if mul[a * q + b] == 1 {
                    inv[a] = b as Elem;
                }
            }
        }
        let primitive = if e == 1 {
            (p - modulus[0]) % p
        } else {
            p
        } as Elem;
        let primitive = if q == 2 { 1 } else { primitive };
        let field = FField(Arc::new(Tables {
            p,
            e,
            q,
            add,
            mul,
            neg,
            inv,
            primitive,
            modulus,
        }));
        if q <= 16 {
            field.check_axioms()?;
        }
        Ok(field)
    }

    fn check_axioms(&self) -> Result<()> {
        let q = self.q() as Elem;
        let bad = |what: &str| Err(Error::FieldAxiom(self.q(), what.to_string()));
        for a in 0..q {
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return bad("identity");
            }
            if a != 0 && self.mul(a, self.inv(a)) != 1 {
                return bad("inverse");
            }
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return bad("commutativity");
                }
                for c in 0..q {
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return bad("distributivity");
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return bad("associativity");
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.0.q
    }
    #[inline]
    pub fn p(&self) -> usize {
        self.0.p
    }
    /// Extension degree over the prime field.
    #[inline]
    pub fn degree(&self) -> usize {
        self.0.e
    }
    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.0.add[a as usize * self.0.q + b as usize]
    }
    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }
    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.0.mul[a as usize * self.0.q + b as usize]
    }
    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.0.neg[a as usize]
    }
    /// Inverse of a nonzero element; `inv(0)` is 0.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.0.inv[a as usize]
    }
    pub fn primitive(&self) -> Elem {
        self.0.primitive
    }
    pub fn modulus(&self) -> &[usize] {
        &self.0.modulus
    }
    pub fn pow(&self, a: Elem, mut k: usize) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }
    /// The Frobenius map `a -> a^(p^t)`.
    pub fn frobenius(&self, a: Elem, t: usize) -> Elem {
        let mut x = a;
        for _ in 0..t % self.degree() {
            x = self.pow(x, self.p());
        }
        x
    }
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.q() as Elem
    }
    pub fn nonzero(&self) -> impl Iterator<Item = Elem> {
        1..self.q() as Elem
    }
}

/// Embedding of `small` into `big` as a lookup table, when `big` is an
/// extension of `small`. Prime-field elements map to themselves.
pub fn embedding(small: &FField, big: &FField) -> Option<Vec<Elem>> {
    if small.p() != big.p() || big.degree() % small.degree() != 0 {
        return None;
    }
    if small.degree() == 1 {
        return Some(small.elements().collect());
    }
    // image of the generator: a root of the defining polynomial of `small`
    let modulus = small.modulus();
    let root = big.nonzero().find(|&b| {
        let val = modulus
            .iter()
            .rev()
            .fold(0, |acc, &c| big.add(big.mul(acc, b), c as Elem));
        val == 0
    })?;
    let mut table = vec![0; small.q()];
    let (mut a, mut b) = (1, 1);
    for _ in 0..small.q() - 1 {
        table[a as usize] = b;
        a = small.mul(a, small.primitive());
        b = big.mul(b, root);
    }
    Some(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(125), Some((5, 3)));
    }

    #[test]
    fn small_fields_satisfy_axioms() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = FField::new(q).unwrap();
            assert_eq!(f.q(), q);
        }
    }

    #[test]
    fn primitive_element_generates() {
        for q in [2, 3, 4, 5, 8, 9, 16, 27, 32, 49, 64, 81, 121, 125, 128] {
            let f = FField::new(q).unwrap();
            let g = f.primitive();
            let mut seen = std::collections::HashSet::new();
            let mut x = 1;
            for _ in 0..q - 1 {
                seen.insert(x);
                x = f.mul(x, g);
            }
            assert_eq!(seen.len(), q - 1, "q={q}");
        }
    }

    #[test]
    fn prime_subfield_is_embedded() {
        let f9 = FField::new(9).unwrap();
        let f3 = FField::new(3).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(f9.add(a, b), f3.add(a, b));
                assert_eq!(f9.mul(a, b), f3.mul(a, b));
            }
        }
    }

    #[test]
    fn frobenius_is_automorphism_of_order_e() {
        let f = FField::new(8).unwrap();
        for a in f.elements() {
            assert_eq!(f.frobenius(a, 3), a);
            for b in f.elements() {
                assert_eq!(
                    f.frobenius(f.mul(a, b), 1),
                    f.mul(f.frobenius(a, 1), f.frobenius(b, 1))
                );
            }
        }
    }

    #[test]
    fn embeddings_are_homomorphisms() {
        for (a, b) in [(2, 4), (2, 8), (4, 16), (3, 9), (4, 64), (8, 64)] {
            let (fa, fb) = (FField::new(a).unwrap(), FField::new(b).unwrap());
            let t = embedding(&fa, &fb).unwrap();
            for x in fa.elements() {
                for y in fa.elements() {
                    assert_eq!(t[fa.add(x, y) as usize], fb.add(t[x as usize], t[y as usize]));
                    assert_eq!(t[fa.mul(x, y) as usize], fb.mul(t[x as usize], t[y as usize]));
                }
            }
        }
        let (f4, f8) = (FField::new(4).unwrap(), FField::new(8).unwrap());
        assert!(embedding(&f4, &f8).is_none());
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(matches!(FField::new(6), Err(Error::NotPrimePower(6))));
        assert!(matches!(FField::new(256), Err(Error::FieldTooLarge(256))));
    }
}
