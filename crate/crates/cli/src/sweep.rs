//! Seeded experiment sweeps over `(n, d)` grids.
//!
//! Every trial draws its game from `derive_seed(base_seed, [n, d, trial])`,
//! so a cell's numbers do not depend on the rest of the grid or on how
//! many workers run it. Trials run on a rayon pool; their results are
//! collected in trial order and reduced sequentially.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use swcp_core::{
    degree_of, find_self_winning, generate, rng, self_reach_labels, swcp_solve, zielonka_solve, DegreeSpec,
    GenConfig, ParityGame, Priority, ReachLabel,
};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepKind {
    SuccessProb,
    SelfWinningFrac,
    NonsparseLoss,
    Timing,
}

impl SweepKind {
    pub const ALL: [SweepKind; 4] =
        [SweepKind::SuccessProb, SweepKind::SelfWinningFrac, SweepKind::NonsparseLoss, SweepKind::Timing];

    pub fn name(self) -> &'static str {
        match self {
            SweepKind::SuccessProb => "success_prob",
            SweepKind::SelfWinningFrac => "self_winning_frac",
            SweepKind::NonsparseLoss => "nonsparse_loss",
            SweepKind::Timing => "timing",
        }
    }

    fn extra_columns(self) -> &'static [&'static str] {
        match self {
            SweepKind::SuccessProb => &["game_success", "game_stderr"],
            SweepKind::NonsparseLoss => &["truth"],
            SweepKind::Timing => &["n_sq", "n_m"],
            SweepKind::SelfWinningFrac => &[],
        }
    }
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepKind {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SweepKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| SweepError::UnknownKind(s.to_string()))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SweepError {
    #[error("unknown sweep kind `{0}`")]
    UnknownKind(String),
    #[error("grids must be nonempty and trials positive")]
    Empty,
    #[error("cell n={n}, d={d}: {message}")]
    Cell { n: usize, d: String, message: String },
}

/// Games with more edges than this are labelled without Zielonka in
/// `nonsparse_loss` sweeps.
pub const DEFAULT_ORACLE_EDGE_BUDGET: usize = 4_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub n_grid: Vec<usize>,
    pub d_grid: Vec<DegreeSpec>,
    pub trials: usize,
    pub base_seed: u64,
    pub priority_count: Priority,
    pub oracle_edge_budget: usize,
}

impl SweepSpec {
    pub fn new(kind: SweepKind, n_grid: Vec<usize>, d_grid: Vec<DegreeSpec>, trials: usize, base_seed: u64) -> Self {
        SweepSpec {
            kind,
            n_grid,
            d_grid,
            trials,
            base_seed,
            priority_count: 2,
            oracle_edge_budget: DEFAULT_ORACLE_EDGE_BUDGET,
        }
    }

    pub fn with_priorities(mut self, c: Priority) -> Self {
        self.priority_count = c;
        self
    }

    /// Seed of one trial's game.
    pub fn trial_seed(&self, n: usize, d: usize, trial: usize) -> u64 {
        rng::derive_seed(self.base_seed, &[n as u64, d as u64, trial as u64])
    }
}

/// How the ground truth of a `nonsparse_loss` cell was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truth {
    Zielonka,
    /// Uncertified share of nodes; an upper bound on the loss.
    UpperBound,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Extra {
    None,
    GameSuccess { fraction: f64, stderr: f64 },
    Truth(Truth),
    Scale { n_sq: f64, n_m: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepCell {
    pub n: usize,
    pub d_spec: DegreeSpec,
    pub d: usize,
    pub trials: usize,
    /// Mean over trials; a fraction, or seconds for timing.
    pub metric: f64,
    pub stderr: f64,
    pub extra: Extra,
}

#[derive(Clone, Copy)]
struct Trial {
    metric: f64,
    /// Fully solved, for `success_prob`.
    flag: bool,
    zielonka: bool,
}

fn run_trial(spec: &SweepSpec, n: usize, d: usize, trial: usize) -> Result<Trial, String> {
    let cfg = GenConfig::new(n, d, spec.trial_seed(n, d, trial)).with_priorities(spec.priority_count);
    let game = generate(&cfg).map_err(|e| e.to_string())?;
    let frac = |k: usize| k as f64 / n as f64;
    Ok(match spec.kind {
        SweepKind::SuccessProb => {
            let sol = swcp_solve(&game);
            Trial { metric: sol.decided_fraction(), flag: sol.is_fully_solved(), zielonka: false }
        }
        SweepKind::SelfWinningFrac => Trial { metric: find_self_winning(&game).fraction(), flag: false, zielonka: false },
        SweepKind::NonsparseLoss => {
            if game.edge_count() <= spec.oracle_edge_budget {
                let truth = zielonka_solve(&game).map_err(|e| e.to_string())?;
                let lost = game.nodes().filter(|&v| truth.winner(v) != game.owner(v)).count();
                Trial { metric: frac(lost), flag: false, zielonka: true }
            } else {
                let open = self_reach_labels(&game).iter().filter(|&&l| l != ReachLabel::OwnerCertified).count();
                Trial { metric: frac(open), flag: false, zielonka: false }
            }
        }
        SweepKind::Timing => Trial { metric: time_solve(&game), flag: false, zielonka: false },
    })
}

/// Seconds for one `swcp_solve`, after a discarded warm-up solve.
fn time_solve(game: &ParityGame) -> f64 {
    std::hint::black_box(swcp_solve(game));
    let start = Instant::now();
    std::hint::black_box(swcp_solve(game));
    start.elapsed().as_secs_f64()
}

fn mean_stderr(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let k = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / k;
    if k < 2.0 {
        return (mean, 0.0);
    }
    let var = xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// Runs the whole grid on `workers` threads. Rows come out n-major, d-minor.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<Vec<SweepCell>, SweepError> {
    if spec.n_grid.is_empty() || spec.d_grid.is_empty() || spec.trials == 0 {
        return Err(SweepError::Empty);
    }
    let cells: Vec<(usize, DegreeSpec, usize)> = spec
        .n_grid
        .iter()
        .flat_map(|&n| spec.d_grid.iter().map(move |&ds| (n, ds, degree_of(ds, n))))
        .collect();
    let tasks: Vec<(usize, usize)> = (0..cells.len()).flat_map(|c| (0..spec.trials).map(move |t| (c, t))).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build().expect("thread pool");
    // Timing trials run one at a time so measurements do not contend.
    let results: Vec<Result<Trial, String>> = if spec.kind == SweepKind::Timing {
        tasks.iter().map(|&(c, t)| run_trial(spec, cells[c].0, cells[c].2, t)).collect()
    } else {
        pool.install(|| tasks.par_iter().map(|&(c, t)| run_trial(spec, cells[c].0, cells[c].2, t)).collect())
    };

    let mut out = Vec::with_capacity(cells.len());
    for (c, chunk) in results.chunks(spec.trials).enumerate() {
        let (n, d_spec, d) = cells[c];
        let trials: Vec<Trial> = chunk
            .iter()
            .map(|r| match r {
                Ok(t) => Ok(*t),
                Err(message) => Err(SweepError::Cell { n, d: d_spec.to_string(), message: message.clone() }),
            })
            .collect::<Result<_, _>>()?;
        let (metric, stderr) = mean_stderr(trials.iter().map(|t| t.metric));
        let extra = match spec.kind {
            SweepKind::SuccessProb => {
                let (fraction, stderr) = mean_stderr(trials.iter().map(|t| if t.flag { 1.0 } else { 0.0 }));
                Extra::GameSuccess { fraction, stderr }
            }
            SweepKind::NonsparseLoss => {
                Extra::Truth(if trials.iter().all(|t| t.zielonka) { Truth::Zielonka } else { Truth::UpperBound })
            }
            SweepKind::Timing => {
                let nf = n as f64;
                Extra::Scale { n_sq: nf * nf, n_m: nf * nf * d as f64 }
            }
            SweepKind::SelfWinningFrac => Extra::None,
        };
        out.push(SweepCell { n, d_spec, d, trials: spec.trials, metric, stderr, extra });
    }
    Ok(out)
}

pub fn csv_header(kind: SweepKind) -> Vec<&'static str> {
    let mut cols = vec!["n", "d", "trials", "metric", "stderr", "kind", "seed"];
    cols.extend_from_slice(kind.extra_columns());
    cols.push("d_spec");
    cols
}

/// CSV text for a sweep. Floats use the shortest round-trip form, so equal
/// results give identical bytes.
pub fn to_csv(spec: &SweepSpec, cells: &[SweepCell]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(csv_header(spec.kind)).expect("in-memory write");
    for cell in cells {
        let mut row = vec![
            cell.n.to_string(),
            cell.d.to_string(),
            cell.trials.to_string(),
            cell.metric.to_string(),
            cell.stderr.to_string(),
            spec.kind.to_string(),
            spec.base_seed.to_string(),
        ];
        match cell.extra {
            Extra::None => {}
            Extra::GameSuccess { fraction, stderr } => row.extend([fraction.to_string(), stderr.to_string()]),
            Extra::Truth(Truth::Zielonka) => row.push("zielonka".into()),
            Extra::Truth(Truth::UpperBound) => row.push("upper_bound".into()),
            Extra::Scale { n_sq, n_m } => row.extend([n_sq.to_string(), n_m.to_string()]),
        }
        row.push(cell.d_spec.to_string());
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_prefix_is_stable() {
        for kind in SweepKind::ALL {
            assert_eq!(&csv_header(kind)[..7], ["n", "d", "trials", "metric", "stderr", "kind", "seed"]);
            assert_eq!(kind.name().parse::<SweepKind>(), Ok(kind));
        }
    }

    #[test]
    fn rows_are_n_major() {
        let spec = SweepSpec::new(SweepKind::SelfWinningFrac, vec![20, 10], vec![DegreeSpec::Const(3), DegreeSpec::Const(1)], 3, 5);
        let cells = run_sweep(&spec, 2).unwrap();
        let order: Vec<_> = cells.iter().map(|c| (c.n, c.d)).collect();
        assert_eq!(order, [(20, 3), (20, 1), (10, 3), (10, 1)]);
        assert!(cells.iter().all(|c| (0.0..=1.0).contains(&c.metric) && c.stderr >= 0.0));
    }

    #[test]
    fn dense_small_games_are_solved() {
        let spec = SweepSpec::new(SweepKind::SuccessProb, vec![10], vec![DegreeSpec::Const(9)], 200, 1);
        let cell = &run_sweep(&spec, 4).unwrap()[0];
        assert!(cell.metric > 0.9, "{}", cell.metric);
    }

    #[test]
    fn bad_cells_are_reported() {
        let spec = SweepSpec::new(SweepKind::SuccessProb, vec![5], vec![DegreeSpec::Const(9)], 2, 1);
        assert!(matches!(run_sweep(&spec, 1), Err(SweepError::Cell { n: 5, .. })));
        let spec = SweepSpec::new(SweepKind::SuccessProb, vec![], vec![DegreeSpec::Const(1)], 2, 1);
        assert_eq!(run_sweep(&spec, 1), Err(SweepError::Empty));
    }
}
