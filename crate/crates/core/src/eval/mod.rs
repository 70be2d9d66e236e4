//! Detection evaluation: IoU matching, per-class precision/recall/F1/AP,
//! mAP, error breakdowns and structural correction heuristics.

mod ap;
mod errors;
mod heuristics;
mod matching;
mod predictions;
mod report;

pub use ap::{average_precision, precision_recall_curve, ScoredOutcome};
pub use errors::{error_distribution, ClassErrors, ErrorBreakdown};
pub use heuristics::{apply_heuristics, Heuristic, HeuristicOutcome, Removal, TITLE_ZONE};
pub use matching::{iou, match_detections, match_order, MatchResult};
pub use predictions::{CoordSpace, Detection, PredictionRow, PredictionSet};
pub use report::{evaluate, ClassReport, EvalReport};
