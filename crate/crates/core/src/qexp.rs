//! Exponents of the perfection: rationals whose denominator is a power of p.
//!
//! Since `Z[1/q] = Z[1/p]` for `q = p^v`, an exponent is stored as a reduced
//! fraction with a p-power denominator. No knowledge of q is needed for
//! arithmetic or ordering; [`QExp::as_q_power`] recovers the `num / q^k`
//! presentation.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{Signed, Zero};

/// A rational exponent `num / den` with `den` a power of the characteristic.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct QExp(Ratio<i64>);

impl QExp {
    pub const ZERO: QExp = QExp(Ratio::new_raw(0, 1));
    pub const ONE: QExp = QExp(Ratio::new_raw(1, 1));

    pub fn int(n: i64) -> QExp {
        QExp(Ratio::from_integer(n))
    }

    /// `num / den`. The caller guarantees `den` is a power of p; this is
    /// checked by [`QExp::checked_new`].
    pub fn new(num: i64, den: i64) -> QExp {
        QExp(Ratio::new(num, den))
    }

    /// `num / den`, or `None` when the reduced denominator is not a power of `p`.
    pub fn checked_new(num: i64, den: i64, p: u64) -> Option<QExp> {
        if den == 0 {
            return None;
        }
        let r = Ratio::new(num, den);
        let mut d = r.denom().unsigned_abs();
        while d > 1 && d.is_multiple_of(p) {
            d /= p;
        }
        (d == 1).then_some(QExp(r))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Multiplies by `q^e`; `e` may be negative.
    pub fn scale_q(&self, q: u64, e: i32) -> QExp {
        let f = q.pow(e.unsigned_abs()) as i64;
        if e >= 0 {
            QExp(self.0 * f)
        } else {
            QExp(self.0 / f)
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> i64 {
        self.0.floor().to_integer()
    }

    /// The presentation `num / q^k` with `k` minimal.
    pub fn as_q_power(&self, q: u64) -> (i64, u32) {
        let mut k = 0u32;
        let mut den = 1i64;
        while self.denom() > den || den % self.denom() != 0 {
            den *= q as i64;
            k += 1;
        }
        (self.numer() * (den / self.denom()), k)
    }

    pub fn min(self, other: QExp) -> QExp {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: QExp) -> QExp {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl PartialOrd for QExp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QExp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl Add for QExp {
    type Output = QExp;
    fn add(self, rhs: QExp) -> QExp {
        QExp(self.0 + rhs.0)
    }
}

impl Sub for QExp {
    type Output = QExp;
    fn sub(self, rhs: QExp) -> QExp {
        QExp(self.0 - rhs.0)
    }
}

impl Neg for QExp {
    type Output = QExp;
    fn neg(self) -> QExp {
        QExp(-self.0)
    }
}

impl Mul<i64> for QExp {
    type Output = QExp;
    fn mul(self, rhs: i64) -> QExp {
        QExp(self.0 * rhs)
    }
}

impl From<i64> for QExp {
    fn from(n: i64) -> QExp {
        QExp::int(n)
    }
}

impl fmt::Debug for QExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}
