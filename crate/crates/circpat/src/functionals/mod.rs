//! The two variational functionals, their derivatives, and the Newton solver.

pub mod newton;
pub mod sparse;
pub mod w;
pub mod wstar;

use serde::{Deserialize, Serialize};

pub use newton::{newton_solve, Energy, NewtonOptions, Sense, SolveReport};
pub use sparse::SparseSym;
pub use w::{grad_w, hessian_w, k_edge, total_w, w_edge, WEnergy};
pub use wstar::{grad_wstar, hessian_wstar, kstar_edge, total_wstar, wstar_edge, WStarEnergy};

/// Real values on faces with a mask of free (solved-for) entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceField {
    pub values: Vec<f64>,
    pub free: Vec<bool>,
}

/// Real values on vertices with a mask of free entries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexField {
    pub values: Vec<f64>,
    pub free: Vec<bool>,
}

macro_rules! field_impl {
    ($t:ident) => {
        impl $t {
            pub fn new(values: Vec<f64>, free: Vec<bool>) -> Self {
                assert_eq!(values.len(), free.len());
                $t { values, free }
            }

            /// All entries fixed.
            pub fn fixed(values: Vec<f64>) -> Self {
                let free = vec![false; values.len()];
                $t { values, free }
            }

            pub fn zeros(n: usize) -> Self {
                Self::fixed(vec![0.0; n])
            }

            pub fn len(&self) -> usize {
                self.values.len()
            }

            pub fn is_empty(&self) -> bool {
                self.values.is_empty()
            }

            /// Copy with the mean subtracted.
            pub fn mean_normalized(&self) -> Self {
                let m = self.values.iter().sum::<f64>() / self.values.len().max(1) as f64;
                $t {
                    values: self.values.iter().map(|v| v - m).collect(),
                    free: self.free.clone(),
                }
            }

            pub fn is_finite(&self) -> bool {
                self.values.iter().all(|v| v.is_finite())
            }
        }
    };
}

field_impl!(FaceField);
field_impl!(VertexField);
