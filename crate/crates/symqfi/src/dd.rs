//! Double-double arithmetic for the collective-unitary partition sums.
//!
//! The sums in `encoding::collective_matrix_elements` combine multinomial
//! weights that grow like 4^N with entry powers that shrink like 2^-N.
//! Individual terms can exceed the final matrix element by a factor of
//! ~1e13 at N = 100, so plain f64 accumulation loses most of its digits
//! to cancellation. A double-double value keeps ~31 significant digits,
//! which is enough margin to hold every published tolerance through
//! N = 200.
//!
//! Only the handful of operations the partition sum needs are provided.
//! Algorithms are the classical error-free transformations: Knuth's
//! two-sum, FMA-based two-prod, and the add/mul/div/sqrt compositions of
//! Dekker and of Hida, Li & Bailey's QD library.

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    let e = (a - (s - v)) + (b - v);
    (s, e)
}

/// Requires |a| >= |b| (or a == 0).
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Dd {
        let (s1, s2) = two_sum(self.hi, b);
        let s2 = s2 + self.lo;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn sub(self, b: Dd) -> Dd {
        self.add(b.neg())
    }

    #[inline]
    pub fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, b);
        let p2 = p2 + self.lo * b;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self.sub(b.mul_f64(q1));
        let q2 = r.hi / b.hi;
        let r = r.sub(b.mul_f64(q2));
        let q3 = r.hi / b.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e }.add_f64(q3)
    }

    /// Requires a non-negative value.
    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        // Karp's correction: one double-double Newton step from the f64 root.
        let approx = 1.0 / self.hi.sqrt();
        let y = self.mul_f64(approx);
        let r = self.sub(y.mul(y));
        y.add(r.mul_f64(0.5 * approx))
    }
}

/// Complex value with double-double components.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub const ZERO: Cdd = Cdd { re: Dd::ZERO, im: Dd::ZERO };
    pub const ONE: Cdd = Cdd { re: Dd::ONE, im: Dd::ZERO };

    #[inline]
    pub fn new(re: f64, im: f64) -> Cdd {
        Cdd { re: Dd::from_f64(re), im: Dd::from_f64(im) }
    }

    #[inline]
    pub fn add(self, b: Cdd) -> Cdd {
        Cdd { re: self.re.add(b.re), im: self.im.add(b.im) }
    }

    #[inline]
    pub fn mul(self, b: Cdd) -> Cdd {
        Cdd {
            re: self.re.mul(b.re).sub(self.im.mul(b.im)),
            im: self.re.mul(b.im).add(self.im.mul(b.re)),
        }
    }

    #[inline]
    pub fn mul_dd(self, s: Dd) -> Cdd {
        Cdd { re: self.re.mul(s), im: self.im.mul(s) }
    }

    #[inline]
    pub fn to_complex(self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_times_three_is_one() {
        let third = Dd::ONE.div(Dd::from_f64(3.0));
        let one = third.mul_f64(3.0);
        assert!((one.sub(Dd::ONE)).to_f64().abs() < 1e-31);
    }

    #[test]
    fn keeps_small_addend_across_large_magnitudes() {
        let x = Dd::from_f64(1e16).add_f64(1.0).add_f64(-1e16);
        assert_eq!(x.to_f64(), 1.0);
    }

    #[test]
    fn sqrt_two_squares_back() {
        let s = Dd::from_f64(2.0).sqrt();
        let err = s.mul(s).sub(Dd::from_f64(2.0)).to_f64().abs();
        assert!(err < 1e-30, "residual {err}");
    }

    #[test]
    fn division_round_trip() {
        let a = Dd::from_f64(std::f64::consts::FRAC_PI_4).add_f64(3.061616997868383e-17);
        let b = Dd::from_f64(1.1e-3);
        let back = a.div(b).mul(b).sub(a).to_f64().abs();
        assert!(back < 1e-30, "residual {back}");
    }

    #[test]
    fn complex_product_matches_f64_for_exact_inputs() {
        let a = Cdd::new(0.5, -0.25);
        let b = Cdd::new(-2.0, 0.125);
        let p = a.mul(b).to_complex();
        let q = num_complex::Complex64::new(0.5, -0.25) * num_complex::Complex64::new(-2.0, 0.125);
        assert_eq!(p, q);
    }

    #[test]
    fn sqrt_of_zero() {
        assert_eq!(Dd::ZERO.sqrt().to_f64(), 0.0);
    }
}
