//! Reed-Solomon codes in evaluation form, with errors-and-erasures
//! decoding.
//!
//! A codeword is the evaluation of a message polynomial of degree below `k`
//! at `n` distinct nonzero points. Decoding handles `e` errors and `f`
//! erasures whenever `2e + f <= n - k` via syndromes of the generalized
//! code (column multipliers `u_i = 1 / prod_{j != i} (x_i - x_j)` make the
//! dual explicit for arbitrary point sets), Berlekamp-Massey on the
//! erasure-adjusted syndrome sequence, Chien search, and Forney's formula.
//! Anything inconsistent (locator degree mismatch, residual syndromes)
//! reports failure instead of a wrong answer.

use crate::error::{Error, Result};
use crate::gf::Field;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RSCode {
    field: Field,
    n: usize,
    k: usize,
    eval_points: Vec<u16>,
    /// Dual column multipliers, cached at construction.
    u: Vec<u16>,
}

impl RSCode {
    /// Code with evaluation points `x_i = alpha^i`, `i = 0..n`.
    pub fn new(field: Field, n: usize, k: usize) -> Result<Self> {
        if n > field.order() {
            return Err(Error::InvalidParameter(format!(
                "n = {n} exceeds the {} nonzero points of GF(2^{})",
                field.order(),
                field.width()
            )));
        }
        let points = (0..n).map(|i| field.exp(i)).collect();
        Self::with_points(field, n, k, points)
    }

    /// Code with caller-chosen evaluation points, which must be distinct
    /// and nonzero.
    pub fn with_points(field: Field, n: usize, k: usize, eval_points: Vec<u16>) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::InvalidParameter(format!("need 0 < k <= n, got k={k} n={n}")));
        }
        if eval_points.len() != n {
            return Err(Error::InvalidParameter("evaluation point count must equal n".into()));
        }
        field.check_elements(&eval_points)?;
        let mut seen = vec![false; field.size()];
        for &x in &eval_points {
            if x == 0 {
                return Err(Error::InvalidParameter("evaluation points must be nonzero".into()));
            }
            if seen[x as usize] {
                return Err(Error::InvalidParameter(format!("repeated evaluation point {x}")));
            }
            seen[x as usize] = true;
        }
        let mut u = Vec::with_capacity(n);
        for i in 0..n {
            let mut prod: u16 = 1;
            for j in 0..n {
                if j != i {
                    prod = field.mul(prod, eval_points[i] ^ eval_points[j]);
                }
            }
            u.push(field.inv(prod)?);
        }
        Ok(RSCode { field, n, k, eval_points, u })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Correctable budget `n - k`: decoding succeeds when
    /// `2 * errors + erasures` stays within it.
    pub fn distance_budget(&self) -> usize {
        self.n - self.k
    }

    pub fn eval_points(&self) -> &[u16] {
        &self.eval_points
    }

    /// Evaluates the message polynomial (coefficients low to high) at every
    /// point.
    pub fn encode(&self, msg: &[u16]) -> Result<Vec<u16>> {
        if msg.len() != self.k {
            return Err(Error::InvalidParameter(format!(
                "message length {} != k = {}",
                msg.len(),
                self.k
            )));
        }
        self.field.check_elements(msg)?;
        Ok(self
            .eval_points
            .iter()
            .map(|&x| msg.iter().rev().fold(0, |acc, &c| self.field.add(self.field.mul(acc, x), c)))
            .collect())
    }

    /// Syndromes `S_l = sum_i u_i r_i x_i^l` for `l = 0..n-k`; all zero
    /// exactly on codewords.
    pub fn syndromes(&self, word: &[u16]) -> Vec<u16> {
        let f = &self.field;
        (0..self.n - self.k)
            .map(|l| {
                let mut s = 0;
                for i in 0..self.n {
                    s ^= f.mul(f.mul(self.u[i], word[i]), f.pow(self.eval_points[i], l as u64));
                }
                s
            })
            .collect()
    }

    /// Decodes a received word with erasures marked `None`, returning the
    /// message. Fails (`DecodeFailure`) if the corruption is inconsistent
    /// with any codeword within the distance budget.
    pub fn decode(&self, received: &[Option<u16>]) -> Result<Vec<u16>> {
        let codeword = self.decode_to_codeword(received)?;
        self.interpolate_message(&codeword)
    }

    /// Same as [`decode`](Self::decode) but returns the corrected codeword.
    pub fn decode_to_codeword(&self, received: &[Option<u16>]) -> Result<Vec<u16>> {
        let f = &self.field;
        if received.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "received length {} != n = {}",
                received.len(),
                self.n
            )));
        }
        let d1 = self.n - self.k; // number of syndromes
        let erasures: Vec<usize> =
            (0..self.n).filter(|&i| received[i].is_none()).collect();
        let nf = erasures.len();
        if nf > d1 {
            return Err(Error::DecodeFailure(format!(
                "{nf} erasures exceed the budget of {d1}"
            )));
        }
        let filled: Vec<u16> = received.iter().map(|c| c.unwrap_or(0)).collect();
        f.check_elements(&filled)?;
        let s = self.syndromes(&filled);
        if s.iter().all(|&x| x == 0) && nf == 0 {
            return Ok(filled);
        }
        // Erasure locator Psi(z) = prod (1 - x_e z).
        let mut psi: Vec<u16> = vec![1];
        for &e in &erasures {
            psi = poly_mul(f, &psi, &[1, self.eval_points[e]]);
        }
        // Modified syndromes T = Psi * S mod z^d1; Berlekamp-Massey on
        // T[nf..] finds the error locator.
        let mut t = poly_mul(f, &psi, &s);
        t.truncate(d1);
        t.resize(d1, 0);
        let lambda = berlekamp_massey(f, &t[nf..]);
        let t_err = lambda.len() - 1;
        if 2 * t_err + nf > d1 {
            return Err(Error::DecodeFailure(format!(
                "locator degree {t_err} with {nf} erasures exceeds the budget of {d1}"
            )));
        }
        // Chien search over the evaluation points.
        let mut error_pos = Vec::new();
        for i in 0..self.n {
            let zi = f.inv(self.eval_points[i])?;
            if poly_eval(f, &lambda, zi) == 0 {
                error_pos.push(i);
            }
        }
        if error_pos.len() != t_err {
            return Err(Error::DecodeFailure(format!(
                "error locator of degree {t_err} has {} roots among the points",
                error_pos.len()
            )));
        }
        // Full corruption locator and evaluator.
        let phi = poly_mul(f, &lambda, &psi);
        let mut omega = poly_mul(f, &phi, &s);
        omega.truncate(d1);
        let phi_deriv = poly_formal_derivative(&phi);
        let mut corrected = filled;
        for &p in erasures.iter().chain(&error_pos) {
            let xp = self.eval_points[p];
            let zp = f.inv(xp)?;
            let denom = f.mul(self.u[p], poly_eval(f, &phi_deriv, zp));
            if denom == 0 {
                return Err(Error::DecodeFailure("repeated locator root".into()));
            }
            let magnitude = f.div(f.mul(xp, poly_eval(f, &omega, zp)), denom)?;
            corrected[p] ^= magnitude;
        }
        if self.syndromes(&corrected).iter().any(|&x| x != 0) {
            return Err(Error::DecodeFailure("residual syndromes after correction".into()));
        }
        Ok(corrected)
    }

    /// Recovers the message polynomial from a full codeword by Lagrange
    /// interpolation on the first `k` points, cross-checked on the rest.
    pub fn interpolate_message(&self, codeword: &[u16]) -> Result<Vec<u16>> {
        let f = &self.field;
        if codeword.len() != self.n {
            return Err(Error::InvalidParameter("codeword length mismatch".into()));
        }
        let xs = &self.eval_points[..self.k];
        let mut msg = vec![0u16; self.k];
        for i in 0..self.k {
            // Basis polynomial prod_{j != i} (z - x_j) / (x_i - x_j).
            let mut basis = vec![0u16; self.k];
            basis[0] = 1;
            let mut deg = 0;
            let mut denom: u16 = 1;
            for j in 0..self.k {
                if j == i {
                    continue;
                }
                // Multiply basis by (z + x_j) in place.
                for p in (0..=deg).rev() {
                    let c = basis[p];
                    basis[p + 1] ^= c;
                    basis[p] = f.mul(c, xs[j]);
                }
                deg += 1;
                denom = f.mul(denom, xs[i] ^ xs[j]);
            }
            let scale = f.div(codeword[i], denom)?;
            for p in 0..self.k {
                msg[p] ^= f.mul(basis[p], scale);
            }
        }
        // The remaining points must agree, or the word was not a codeword.
        let reencoded = self.encode(&msg)?;
        if reencoded != codeword {
            return Err(Error::DecodeFailure("word is not a codeword".into()));
        }
        Ok(msg)
    }
}

/// Product of polynomials with coefficients low to high.
fn poly_mul(f: &Field, a: &[u16], b: &[u16]) -> Vec<u16> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u16; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] ^= f.mul(ai, bj);
        }
    }
    out
}

fn poly_eval(f: &Field, p: &[u16], x: u16) -> u16 {
    p.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

/// Formal derivative in characteristic 2: odd-degree coefficients shift
/// down, even ones vanish.
fn poly_formal_derivative(p: &[u16]) -> Vec<u16> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| if i % 2 == 1 { c } else { 0 })
        .collect()
}

/// Minimal LFSR (connection polynomial, constant term 1) generating `seq`.
fn berlekamp_massey(f: &Field, seq: &[u16]) -> Vec<u16> {
    let mut lambda: Vec<u16> = vec![1];
    let mut prev: Vec<u16> = vec![1];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut b: u16 = 1;
    for i in 0..seq.len() {
        let mut delta = seq[i];
        for j in 1..lambda.len().min(i + 1) {
            delta ^= f.mul(lambda[j], seq[i - j]);
        }
        if delta == 0 {
            m += 1;
        } else if 2 * l <= i {
            let old = lambda.clone();
            let coef = f.div(delta, b).unwrap();
            if lambda.len() < prev.len() + m {
                lambda.resize(prev.len() + m, 0);
            }
            for (j, &pj) in prev.iter().enumerate() {
                lambda[j + m] ^= f.mul(coef, pj);
            }
            l = i + 1 - l;
            prev = old;
            b = delta;
            m = 1;
        } else {
            let coef = f.div(delta, b).unwrap();
            if lambda.len() < prev.len() + m {
                lambda.resize(prev.len() + m, 0);
            }
            for (j, &pj) in prev.iter().enumerate() {
                lambda[j + m] ^= f.mul(coef, pj);
            }
            m += 1;
        }
    }
    while lambda.len() > 1 && *lambda.last().unwrap() == 0 {
        lambda.pop();
    }
    lambda
}

#[derive(Serialize, Deserialize)]
struct RSCodeRepr {
    b: u32,
    reduction_poly: u32,
    n: usize,
    k: usize,
    eval_points: Vec<u16>,
}

impl Serialize for RSCode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RSCodeRepr {
            b: self.field.width(),
            reduction_poly: self.field.poly(),
            n: self.n,
            k: self.k,
            eval_points: self.eval_points.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RSCode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = RSCodeRepr::deserialize(d)?;
        let field = Field::with_poly(repr.b, repr.reduction_poly).map_err(D::Error::custom)?;
        RSCode::with_points(field, repr.n, repr.k, repr.eval_points).map_err(D::Error::custom)
    }
}
