//! Atiyah-Hirzebruch style spectral-sequence engine for reduced spin bordism:
//! descriptor files for spaces, coefficient rows, hints and morphisms; page
//! construction and turning; vanishing deductions by naturality; extension
//! resolution; filtered assembly of the answer groups.

mod descriptor;
mod engine;
mod extension;
mod pipeline;

pub use descriptor::{
    parse_coeff, parse_group_literal, AhssError, CoefficientRow, DiffHint, ExtHint, HintFile,
    HintJustification, HintKind, HomologyTable, LabeledGroup, MapFile, SpaceDescriptor, TotalHint,
};
pub use engine::{DiffStatus, EntryState, Page, ResolvedDifferential, Run, SSMorphism};
pub use extension::{Assembled, ExtRecord, ExtResolution, FiltrationReport, PieceRecord};
pub use pipeline::{render_page, render_report, render_report_machine, CoeffChoice, Runner};
