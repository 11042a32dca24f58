//! Adaptive spatiotemporal least-squares prediction.
//!
//! Each interior pixel is predicted from a six-element context: its four
//! rhombus neighbours plus the co-located pixels of the two partner frames
//! chosen by [`context_frames`]. The weights are fitted per pixel on a
//! closed 6x6 system whose samples are the six context pixels themselves,
//! each described by its own six-element context. The pixel being predicted
//! is never read: wherever it would appear in the training rows it is
//! replaced by the fixed rhombus/temporal estimate, so the embedder and the
//! extractor see the same system.
//!
//! All arithmetic runs in one fixed order on `f64` so both sides produce the
//! same prediction bit for bit.

use crate::video::{context_frames, is_interior, Frame, FrameSequence, PixelCoord};

pub const CONTEXT_LEN: usize = 6;

/// Elimination pivots smaller than this mark the system singular.
pub const PIVOT_EPSILON: f64 = 1e-9;

/// `[north, south, west, east, temporal-a, temporal-b]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContextVector(pub [f64; CONTEXT_LEN]);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PredictorCoefficients([f64; CONTEXT_LEN]);

impl PredictorCoefficients {
    /// Returns `None` unless every weight is finite.
    pub fn new(weights: [f64; CONTEXT_LEN]) -> Option<Self> {
        weights
            .iter()
            .all(|w| w.is_finite())
            .then_some(PredictorCoefficients(weights))
    }

    pub fn weights(&self) -> &[f64; CONTEXT_LEN] {
        &self.0
    }
}

/// Rows are the contexts of the six training samples, `targets` their values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainingSystem {
    pub rows: [[f64; CONTEXT_LEN]; CONTEXT_LEN],
    pub targets: [f64; CONTEXT_LEN],
}

impl TrainingSystem {
    /// Max-norm of `rows * weights - targets`.
    pub fn residual(&self, coefficients: &PredictorCoefficients) -> f64 {
        let mut worst = 0.0f64;
        for (row, &y) in self.rows.iter().zip(&self.targets) {
            let mut acc = 0.0;
            for (x, v) in row.iter().zip(coefficients.weights()) {
                acc += x * v;
            }
            worst = worst.max((acc - y).abs());
        }
        worst
    }
}

/// The normal equations have no unique solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SingularSystem;

/// Everything computed on the way to one prediction.
#[derive(Clone, Debug, PartialEq)]
pub struct PredictionDetail {
    pub estimate: u8,
    pub context: ContextVector,
    pub system: TrainingSystem,
    pub coefficients: Result<PredictorCoefficients, SingularSystem>,
    pub prediction: u8,
}

/// Frame `k` together with its two temporal partners.
struct Neighborhood<'a> {
    frames: [&'a Frame; 3],
    row: usize,
    col: usize,
    /// Replaces the centre sample wherever a training row would read it.
    estimate: f64,
}

// For each role, the other two roles in (centre, a, b) order.
const PARTNERS: [(usize, usize); 3] = [(1, 2), (0, 2), (0, 1)];

impl<'a> Neighborhood<'a> {
    fn new(seq: &'a FrameSequence, coord: PixelCoord) -> Self {
        let (ka, kb) = context_frames(coord.frame, seq.len())
            .expect("prediction requires a sequence of at least three frames");
        assert!(
            is_interior(seq.width(), seq.height(), coord.row, coord.col),
            "{coord} is outside the predictable interior"
        );
        let frames = [seq.frame(coord.frame), seq.frame(ka), seq.frame(kb)];
        let mut hood = Neighborhood {
            frames,
            row: coord.row,
            col: coord.col,
            estimate: 0.0,
        };
        hood.estimate = f64::from(hood.fixed_estimate());
        hood
    }

    fn fixed_estimate(&self) -> u8 {
        let (i, j) = (self.row, self.col);
        let center = self.frames[0];
        let sum = u32::from(center.get(i - 1, j))
            + u32::from(center.get(i + 1, j))
            + u32::from(center.get(i, j - 1))
            + u32::from(center.get(i, j + 1))
            + u32::from(self.frames[1].get(i, j));
        // Non-negative, and sum/5 never has a fractional part of exactly 0.5,
        // so (sum + 2) / 5 is round-half-away-from-zero.
        let rounded = (sum + 2) / 5;
        debug_assert!(rounded <= 255);
        rounded.min(255) as u8
    }

    #[inline]
    fn read(&self, role: usize, row: usize, col: usize) -> f64 {
        if role == 0 && row == self.row && col == self.col {
            self.estimate
        } else {
            f64::from(self.frames[role].get(row, col))
        }
    }

    fn context_of(&self, role: usize, row: usize, col: usize) -> [f64; CONTEXT_LEN] {
        let (pa, pb) = PARTNERS[role];
        [
            self.read(role, row - 1, col),
            self.read(role, row + 1, col),
            self.read(role, row, col - 1),
            self.read(role, row, col + 1),
            self.read(pa, row, col),
            self.read(pb, row, col),
        ]
    }

    fn context(&self) -> ContextVector {
        ContextVector(self.context_of(0, self.row, self.col))
    }

    fn training_system(&self) -> TrainingSystem {
        let (i, j) = (self.row, self.col);
        let samples = [
            (0, i - 1, j),
            (0, i + 1, j),
            (0, i, j - 1),
            (0, i, j + 1),
            (1, i, j),
            (2, i, j),
        ];
        let mut rows = [[0.0; CONTEXT_LEN]; CONTEXT_LEN];
        let mut targets = [0.0; CONTEXT_LEN];
        for (m, &(role, r, c)) in samples.iter().enumerate() {
            rows[m] = self.context_of(role, r, c);
            targets[m] = self.read(role, r, c);
        }
        TrainingSystem { rows, targets }
    }
}

/// Fixed estimate: the rounded mean of the four rhombus neighbours and the
/// co-located pixel of the primary partner frame.
pub fn fixed_estimate(seq: &FrameSequence, coord: PixelCoord) -> u8 {
    Neighborhood::new(seq, coord).fixed_estimate()
}

pub fn gather_context(seq: &FrameSequence, coord: PixelCoord) -> ContextVector {
    Neighborhood::new(seq, coord).context()
}

pub fn build_training_system(seq: &FrameSequence, coord: PixelCoord) -> TrainingSystem {
    Neighborhood::new(seq, coord).training_system()
}

/// Solves the normal equations `(XᵀX) v = Xᵀy` by Gaussian elimination with
/// partial pivoting.
pub fn solve_coefficients(
    system: &TrainingSystem,
) -> Result<PredictorCoefficients, SingularSystem> {
    const N: usize = CONTEXT_LEN;
    let x = &system.rows;
    let y = &system.targets;

    // Augmented [XᵀX | Xᵀy].
    let mut a = [[0.0f64; N + 1]; N];
    for p in 0..N {
        for q in 0..N {
            let mut acc = 0.0;
            for row in x {
                acc += row[p] * row[q];
            }
            a[p][q] = acc;
        }
        let mut acc = 0.0;
        for (row, &target) in x.iter().zip(y) {
            acc += row[p] * target;
        }
        a[p][N] = acc;
    }

    for col in 0..N {
        let mut pivot = col;
        for r in col + 1..N {
            if a[r][col].abs() > a[pivot][col].abs() {
                pivot = r;
            }
        }
        let magnitude = a[pivot][col].abs();
        if magnitude.is_nan() || magnitude < PIVOT_EPSILON {
            return Err(SingularSystem);
        }
        a.swap(col, pivot);
        let (upper, lower) = a.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for row in lower {
            let factor = row[col] / pivot_row[col];
            if factor == 0.0 {
                continue;
            }
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= factor * p;
            }
        }
    }

    let mut v = [0.0f64; N];
    for r in (0..N).rev() {
        let mut acc = a[r][N];
        for c in r + 1..N {
            acc -= a[r][c] * v[c];
        }
        v[r] = acc / a[r][r];
    }
    PredictorCoefficients::new(v).ok_or(SingularSystem)
}

/// `floor(Σ vₘ·ctxₘ)` clamped to `[0, 255]`.
pub fn predict(coefficients: &PredictorCoefficients, context: &ContextVector) -> u8 {
    let mut acc = 0.0f64;
    for (v, x) in coefficients.weights().iter().zip(&context.0) {
        acc += v * x;
    }
    if acc.is_nan() {
        return 0;
    }
    acc.floor().clamp(0.0, 255.0) as u8
}

/// Least-squares prediction for an interior pixel, falling back to
/// [`fixed_estimate`] when the training system is singular.
pub fn adaptive_predict(seq: &FrameSequence, coord: PixelCoord) -> u8 {
    let hood = Neighborhood::new(seq, coord);
    match solve_coefficients(&hood.training_system()) {
        Ok(v) => predict(&v, &hood.context()),
        Err(SingularSystem) => hood.estimate as u8,
    }
}

/// Same as [`adaptive_predict`] but returns the intermediate values.
pub fn explain(seq: &FrameSequence, coord: PixelCoord) -> PredictionDetail {
    let hood = Neighborhood::new(seq, coord);
    let estimate = hood.fixed_estimate();
    let context = hood.context();
    let system = hood.training_system();
    let coefficients = solve_coefficients(&system);
    let prediction = match &coefficients {
        Ok(v) => predict(v, &context),
        Err(SingularSystem) => estimate,
    };
    PredictionDetail {
        estimate,
        context,
        system,
        coefficients,
        prediction,
    }
}
