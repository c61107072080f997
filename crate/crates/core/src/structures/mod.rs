//! Structure-level checks: Gerstenhaber axioms, the degree split of a
//! square-zero operator, derivation properties, the BV∞ conditions and the
//! BV structure induced on cohomology.

pub mod bvinfty;
pub mod cohomology;
pub mod derivation;
pub mod gerstenhaber;
pub mod linalg;
pub mod report;
pub mod split;

pub use bvinfty::check_bvinfty;
pub use cohomology::{cohomology, induced_bv, CohomologyBasis, InducedBv, Weights, Window};
pub use derivation::check_derivation_lemma;
pub use gerstenhaber::{check_gerstenhaber, GerstenhaberOps, Grading};
pub use report::{Check, Report, Verdict, Witness};
pub use split::{check_split, degree_split, expansion_identities, SplitResult};

use crate::algebra::Element;
use crate::brackets::bv_bracket;
use crate::diffop::Operator;
use crate::error::Result;

/// `(-1)^{|a|} F_D^2(a, b)` extended bilinearly to inhomogeneous arguments.
pub fn bracket_bilinear(d: &Operator, a: &Element, b: &Element) -> Result<Element> {
    let mut out = Element::zero(d.table());
    for pa in a.grade_decompose().values() {
        for pb in b.grade_decompose().values() {
            out += &bv_bracket(d, pa, pb)?;
        }
    }
    Ok(out)
}
