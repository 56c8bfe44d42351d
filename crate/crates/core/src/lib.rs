//! Verification engine for finitely presented oriented pro-p groups.
//!
//! The modules build on each other: [`padic`] arithmetic and [`words`]
//! feed [`presentations`]; [`kummer`] and [`torsion`] give two independent
//! tests of cohomological Kummerianity; [`cohomology`] and [`massey`] work
//! with `Z/p` coefficients; [`subgroups`] produces Reidemeister–Schreier
//! presentations of finite-index kernels.

pub mod cohomology;
pub mod fixtures;
pub mod format;
pub mod fp;
pub mod kummer;
pub mod massey;
pub mod padic;
pub mod presentations;
pub mod subgroups;
pub mod torsion;
pub mod words;

use thiserror::Error;

pub use format::{parse, parse_unchecked, to_file_string};
pub use padic::{Padic, UnitOneP};
pub use presentations::{Orientation, OrientedPresentation, Presentation};
pub use words::Word;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Padic(#[from] padic::PadicError),
    #[error(transparent)]
    Word(#[from] words::WordError),
    #[error(transparent)]
    Presentation(#[from] presentations::PresentationError),
    #[error(transparent)]
    Format(#[from] format::FormatError),
    #[error(transparent)]
    Kummer(#[from] kummer::KummerError),
    #[error(transparent)]
    Torsion(#[from] torsion::TorsionError),
    #[error(transparent)]
    Cohomology(#[from] cohomology::CohomologyError),
    #[error(transparent)]
    Massey(#[from] massey::MasseyError),
    #[error(transparent)]
    Subgroup(#[from] subgroups::SubgroupError),
}
