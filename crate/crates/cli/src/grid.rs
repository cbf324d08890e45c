use std::str::FromStr;

/// Closed uniform grid `start:stop:points`.
///
/// `points >= 2` with `start < stop`, or the single point `x:x:1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, k] = parts.as_slice() else {
            return Err(format!("grid `{s}` is not start:stop:points"));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("grid bound `{t}` is not a number"))
        };
        let (start, stop) = (num(a)?, num(b)?);
        let points: usize = k
            .trim()
            .parse()
            .map_err(|_| format!("grid count `{k}` is not a positive integer"))?;
        if !(start.is_finite() && stop.is_finite()) {
            return Err(format!("grid `{s}` has non-finite bounds"));
        }
        let single = points == 1 && start == stop;
        if !single && !(points >= 2 && start < stop) {
            return Err(format!(
                "grid `{s}` needs start < stop and at least 2 points (or x:x:1)"
            ));
        }
        Ok(GridSpec { start, stop, points })
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.points)
    }
}
