//! Prefix scans for negative terms: exact recurrence first, certified
//! intervals beyond `exact_below`, exact matrix powering on ambiguity.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::lrs::Lrs;
use crate::numeric::CBox;
use crate::spectral::{exp_poly, ExpPoly, SignPolicy};

/// Resumable scan over `n = 0, 1, 2, ...`.
pub struct PrefixScanner<'a> {
    u: &'a Lrs,
    policy: SignPolicy,
    next: u64,
    window: Vec<BigInt>,
    ep: Option<ExpPoly>,
    powers: Vec<CBox>,
    bases: Vec<CBox>,
    coeffs: Vec<Vec<CBox>>,
    prec: u32,
    since_reset: u64,
    pub exact_fallbacks: u64,
}

const RESET_EVERY: u64 = 32;

impl<'a> PrefixScanner<'a> {
    pub fn new(u: &'a Lrs, policy: SignPolicy) -> Self {
        PrefixScanner {
            u,
            policy,
            next: 0,
            window: vec![],
            ep: None,
            powers: vec![],
            bases: vec![],
            coeffs: vec![],
            prec: 0,
            since_reset: 0,
            exact_fallbacks: 0,
        }
    }

    /// Indices below this one have been checked.
    pub fn position(&self) -> u64 {
        self.next
    }

    /// Least `n <= upto` (not yet scanned) with `u_n < 0`.
    pub fn advance_to(&mut self, upto: u64) -> Option<(u64, BigInt)> {
        while self.next <= upto {
            let n = self.next;
            self.next += 1;
            if n <= self.policy.exact_below || self.ep.as_ref().is_some_and(|e| e.is_empty()) && n < 64 {
                let t = self.exact_step(n);
                if t.is_negative() {
                    return Some((n, t));
                }
                continue;
            }
            match self.interval_sign(n, upto) {
                Some(s) if s > 0 => {}
                Some(_) => {
                    let t = self.u.term(n);
                    if t.is_negative() {
                        return Some((n, t));
                    }
                }
                None => {
                    self.exact_fallbacks += 1;
                    let t = self.u.term(n);
                    if t.is_negative() {
                        return Some((n, t));
                    }
                }
            }
        }
        None
    }

    fn exact_step(&mut self, n: u64) -> BigInt {
        let k = self.u.order();
        let t = if (n as usize) < k {
            self.u.initial()[n as usize].clone()
        } else {
            let w = &self.window;
            let c = self.u.coeffs();
            (0..k).fold(BigInt::zero(), |acc, i| acc + &c[i] * &w[w.len() - 1 - i])
        };
        self.window.push(t.clone());
        if self.window.len() > k {
            self.window.remove(0);
        }
        t
    }

    fn ensure_ep(&mut self, upto: u64) -> bool {
        if self.ep.is_none() {
            match exp_poly(self.u) {
                Ok(ep) => {
                    let extra = 64 - upto.max(2).leading_zeros();
                    self.prec = 96 + 2 * extra;
                    let r = ep.refined((self.prec + extra + 16) as i64);
                    self.bases = r.terms.iter().map(|t| t.root.enclosure()).collect();
                    self.coeffs = r.terms.iter().map(|t| t.coeff_poly.iter().map(|c| c.enclosure()).collect()).collect();
                    self.ep = Some(r);
                }
                Err(_) => return false,
            }
        }
        true
    }

    /// `Some(sign)` when the interval decides; positive or zero terms are fine.
    fn interval_sign(&mut self, n: u64, upto: u64) -> Option<i32> {
        if !self.ensure_ep(upto) {
            return None;
        }
        let prec = self.prec;
        if self.powers.is_empty() || self.since_reset >= RESET_EVERY {
            self.powers = self.bases.iter().map(|b| b.pow(n, prec)).collect();
            self.since_reset = 0;
        } else {
            for (p, b) in self.powers.iter_mut().zip(&self.bases) {
                *p = p.mul(b, prec);
            }
            self.since_reset += 1;
        }
        let nb = crate::numeric::Interval::from_int(&BigInt::from(n));
        let mut acc = CBox::zero();
        for (cp, p) in self.coeffs.iter().zip(&self.powers) {
            let mut c = CBox::zero();
            for x in cp.iter().rev() {
                c = c.mul_real(&nb, prec).add(x, prec);
            }
            acc = acc.add(&c.mul(p, prec), prec);
        }
        match acc.re.sign() {
            Some(s) if s != 0 => Some(s),
            _ => None,
        }
    }
}

/// Least `n <= upto` with `u_n < 0`.
pub fn prefix_check(u: &Lrs, upto: u64, policy: &SignPolicy) -> Option<(u64, BigInt)> {
    PrefixScanner::new(u, *policy).advance_to(upto)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let p = SignPolicy { exact_below: 200, max_precision_bits: 1024 };
        let fib = Lrs::from_i64(&[1, 1], &[0, 1]).unwrap();
        assert_eq!(prefix_check(&fib, 10_000, &p), None);
        let u = Lrs::from_i64(&[1, 1], &[-1, 5]).unwrap();
        assert_eq!(prefix_check(&u, 100, &p), Some((0, BigInt::from(-1))));
        let v = Lrs::from_i64(&[11, -55, 125], &[0, 4, 64]).unwrap();
        assert_eq!(prefix_check(&v, 10_000, &p), None);
        // negative only far beyond the exact window
        let w = Lrs::from_i64(&[2, -1], &[600, 599]).unwrap();
        assert_eq!(prefix_check(&w, 10_000, &p), Some((601, BigInt::from(-1))));
    }
}
