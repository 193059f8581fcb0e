//! Finite models of the full knot Floer complex over GF(2).
//!
//! A generator `x` sits on the diagonal `j − i = A(x)`. An arrow `x → y` with
//! `u_power = a` is the differential component from `[x, 0, A(x)]` to
//! `[y, −a, A(x) − b]`, where the vertical drop `b = A(x) − A(y) + a` is
//! derived from the gradings.

mod complex;
mod model;
mod reduce;
mod slices;

pub use complex::{ChainMap, GradedComplex, Homology};
pub use model::{load_model, parse_and_validate, Arrow, CfkModel, Flip, Generator};
pub use reduce::reduce_model;
pub use slices::{
    a_placement, b_complex, b_differential, b_slice, build_a, edge_maps, genus, h_matrix, hf_rank, hfk_ranks,
    hfk_total, slice_indices, v_matrix, Slice,
};
