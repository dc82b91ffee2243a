//! Evaluation of the family over an index window.
//!
//! With the `parallel` feature the window is fanned out over the rayon
//! pool; without it, or with [`Execution::Sequential`], members are
//! evaluated in order on the calling thread. Results are always returned
//! sorted by `(p, q)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cusp::CuspData;
use crate::family::{build_record, FamilyIndex, GeodesicRecord};
use crate::simplicity::{assess, Assessment, CheckOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub p_min: i64,
    pub p_max: i64,
    pub q_min: i64,
    pub q_max: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("empty or inverted window: p {p_min}..={p_max}, q {q_min}..={q_max}")]
pub struct WindowError {
    pub p_min: i64,
    pub p_max: i64,
    pub q_min: i64,
    pub q_max: i64,
}

impl Window {
    pub fn new(p_min: i64, p_max: i64, q_min: i64, q_max: i64) -> Result<Self, WindowError> {
        if p_min > p_max || q_min > q_max {
            return Err(WindowError { p_min, p_max, q_min, q_max });
        }
        Ok(Self { p_min, p_max, q_min, q_max })
    }

    pub fn single(p: i64, q: i64) -> Self {
        Self { p_min: p, p_max: p, q_min: q, q_max: q }
    }

    pub fn len(&self) -> usize {
        ((self.p_max - self.p_min + 1) * (self.q_max - self.q_min + 1)) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Indices in lexicographic `(p, q)` order.
    pub fn indices(&self) -> Vec<FamilyIndex> {
        (self.p_min..=self.p_max)
            .flat_map(|p| (self.q_min..=self.q_max).map(move |q| FamilyIndex::new(p, q)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub record: GeodesicRecord,
    pub assessment: Assessment,
}

pub fn evaluate(cusp: &CuspData, idx: FamilyIndex, opts: &CheckOptions) -> Evaluation {
    let record = build_record(cusp, idx);
    let assessment = assess(&record, cusp, opts);
    Evaluation { record, assessment }
}

/// Applies `f` to every index, preserving input order.
pub fn map_indices<T, F>(indices: &[FamilyIndex], mode: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(FamilyIndex) -> T + Sync + Send,
{
    match mode {
        Execution::Sequential => indices.iter().map(|&i| f(i)).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            indices.par_iter().map(|&i| f(i)).collect()
        }
        #[cfg(not(feature = "parallel"))]
        Execution::Parallel => indices.iter().map(|&i| f(i)).collect(),
    }
}

pub fn evaluate_window(cusp: &CuspData, window: &Window, opts: &CheckOptions, mode: Execution) -> Vec<Evaluation> {
    map_indices(&window.indices(), mode, |idx| evaluate(cusp, idx, opts))
}

/// Per-verdict totals for a result set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VerdictCounts {
    pub simple: usize,
    pub long_arc_nonsimple: usize,
    pub short_arc_unverified: usize,
    pub axis_too_low: usize,
    pub near_threshold: usize,
}

impl VerdictCounts {
    pub fn tally(evals: &[Evaluation]) -> Self {
        use crate::simplicity::SimplicityVerdict::*;
        let mut c = Self::default();
        for e in evals {
            match e.assessment.verdict {
                Simple => c.simple += 1,
                LongArcNonsimple(_) => c.long_arc_nonsimple += 1,
                ShortArcUnverified { .. } => c.short_arc_unverified += 1,
                AxisTooLow => c.axis_too_low += 1,
            }
            if e.assessment.near_threshold {
                c.near_threshold += 1;
            }
        }
        c
    }

    pub fn total(&self) -> usize {
        self.simple + self.long_arc_nonsimple + self.short_arc_unverified + self.axis_too_low
    }
}
