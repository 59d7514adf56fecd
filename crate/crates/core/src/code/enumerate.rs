use crate::ring::ResidueVector;

use super::LinearCode;

/// Odometer over the Howell rows: every codeword is uniquely
/// sum c_i * row_i with 0 <= c_i < m / pivot_i.
pub struct Codewords<'a> {
    code: &'a LinearCode,
    limits: Vec<u32>,
    digits: Vec<u32>,
    current: Vec<u32>,
    done: bool,
}

impl<'a> Codewords<'a> {
    pub(super) fn new(code: &'a LinearCode) -> Self {
        let h = code.howell_form();
        Codewords {
            code,
            limits: h.cardinality_factors().collect(),
            digits: vec![0; h.rows().len()],
            current: vec![0; code.length()],
            done: false,
        }
    }

    fn advance(&mut self) {
        let m = self.code.modulus().order();
        let rows = self.code.howell_form().rows();
        for i in 0..self.digits.len() {
            self.digits[i] += 1;
            if self.digits[i] < self.limits[i] {
                for (x, &y) in self.current.iter_mut().zip(&rows[i]) {
                    *x = (*x + y) % m;
                }
                return;
            }
            // wrap: remove (limit - 1) copies of the row
            self.digits[i] = 0;
            let back = (self.limits[i] - 1) as u64;
            for (x, &y) in self.current.iter_mut().zip(&rows[i]) {
                let sub = (back * y as u64 % m as u64) as u32;
                *x = (*x + m - sub) % m;
            }
        }
        self.done = true;
    }
}

impl Iterator for Codewords<'_> {
    type Item = ResidueVector;

    fn next(&mut self) -> Option<ResidueVector> {
        if self.done {
            return None;
        }
        let out = ResidueVector::from_raw(self.code.modulus(), self.current.clone());
        self.advance();
        Some(out)
    }
}
