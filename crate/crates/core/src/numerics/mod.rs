//! Quadrature and series engines.

mod quadrature;
mod series;
mod special;

pub use quadrature::{
    integrate_interval, integrate_interval_vec, integrate_square_vec, integrate_triangle,
    integrate_triangle_vec, integrate_window, integrate_window_vec, Quadrature, QuadratureVec, WindowSpec,
};
pub use series::{mode_sum, mode_sum_array, mode_sum_smooth, SumArrayResult, SumResult, SumSpec, TailMode};
pub use special::{dawson, erfc};
