use super::{Cx, Real};

/// Neumaier (improved Kahan–Babuška) running sum.
#[derive(Clone, Debug)]
pub struct CompensatedSum<R> {
    sum: R,
    comp: R,
}

impl<R: Real> Default for CompensatedSum<R> {
    fn default() -> Self {
        Self::new()
    }
}

impl<R: Real> CompensatedSum<R> {
    pub fn new() -> Self {
        Self { sum: R::zero(), comp: R::zero() }
    }

    pub fn add(&mut self, x: &R) {
        let t = self.sum.clone() + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum.clone() - &t) + x;
        } else {
            self.comp += (x.clone() - &t) + &self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> R {
        self.sum.clone() + &self.comp
    }
}

/// Component-wise compensated sum of complex values.
#[derive(Clone, Debug)]
pub struct ComplexSum<R> {
    re: CompensatedSum<R>,
    im: CompensatedSum<R>,
}

impl<R: Real> Default for ComplexSum<R> {
    fn default() -> Self {
        Self::new()
    }
}

impl<R: Real> ComplexSum<R> {
    pub fn new() -> Self {
        Self { re: CompensatedSum::new(), im: CompensatedSum::new() }
    }

    pub fn add(&mut self, z: &Cx<R>) {
        self.re.add(&z.re);
        self.im.add(&z.im);
    }

    pub fn value(&self) -> Cx<R> {
        Cx::new(self.re.value(), self.im.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_mass() {
        let mut s = CompensatedSum::<f64>::new();
        for x in [1.0, 1e100, 1.0, -1e100] {
            s.add(&x);
        }
        assert_eq!(s.value(), 2.0);
    }
}
