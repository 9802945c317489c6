use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "geolab",
    version,
    about = "Complex geodesics of convex domains and C-convexity scans of semitube domains",
    after_help = "Exit codes: 0 success/certified, 1 usage or input error, 2 rejected, 3 degenerate, \
                  4 no convergence, 5 scan violations found."
)]
pub struct Cli {
    /// Cap on worker threads for the data-parallel loops.
    #[arg(long, global = true, env = "GEOLAB_THREADS")]
    pub threads: Option<usize>,

    /// Run every data-parallel loop sequentially.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reconstruct, certify, connect and vary complex geodesics.
    #[command(subcommand)]
    Geodesic(GeodesicCmd),
    /// Section scans and convexity checks for semitube domains.
    #[command(subcommand)]
    Semitube(SemitubeCmd),
    /// Maintenance helpers.
    #[command(subcommand)]
    Util(UtilCmd),
}

/// Certification knobs shared by the geodesic commands.
#[derive(Args, Debug, Clone)]
pub struct CertifyArgs {
    /// Seed of the interior/boundary point sampler.
    #[arg(long, default_value_t = 0)]
    pub sample_seed: u64,
    /// Allowed positive part of Re psi (in [1e-14, 1e-2]).
    #[arg(long, value_parser = tolerance)]
    pub tol_psi: Option<f64>,
    /// Required margin of Re psi_{phi(0)}(0) below zero.
    #[arg(long, value_parser = tolerance)]
    pub tol_nd: Option<f64>,
    /// Largest accepted Hardy residual of the head components.
    #[arg(long, value_parser = tolerance)]
    pub tol_holo: Option<f64>,
    /// Largest accepted atom compatibility residual.
    #[arg(long, value_parser = tolerance)]
    pub tol_atom: Option<f64>,
    /// Largest accepted distance between phi* and the support data.
    #[arg(long, value_parser = tolerance)]
    pub tol_support: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Report path. A `.csv` path receives the samples and the JSON report
    /// goes next to it; without `--out` the report is printed.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// SVG plot path (a directory for semitube commands).
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum GeodesicCmd {
    /// Build phi from a dual map h and certify it.
    Compute {
        /// Built-in domain name (semiball, paraboloid, ball, tube_square), inline JSON or a file.
        #[arg(long)]
        domain: String,
        /// Dual map parameters: inline JSON or a file.
        #[arg(long)]
        h: String,
        /// Atoms of the singular part: inline JSON list or a file.
        #[arg(long)]
        atoms: Option<String>,
        /// Imaginary constants of the tail components, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        imconst: Option<Vec<f64>>,
        /// Number of circle nodes (power of two).
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[command(flatten)]
        certify: CertifyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Re-certify a stored candidate.
    Certify {
        /// Candidate JSON (a bare candidate or a report that contains one).
        #[arg(long)]
        candidate: String,
        /// Dual map to certify against; defaults to the candidate's own.
        #[arg(long)]
        h: Option<String>,
        #[command(flatten)]
        certify: CertifyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Find a certified geodesic through p = phi(0) and q = phi(sigma).
    Connect {
        #[arg(long)]
        domain: String,
        /// Start point as JSON `[[re, im], ...]`.
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// End point as JSON `[[re, im], ...]`.
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// Seed of the multi-start generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        starts: usize,
        #[arg(long, default_value_t = 200)]
        max_iterations: usize,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        /// Polynomial degree of the free head components.
        #[arg(long, default_value_t = 4)]
        free_degree: usize,
        #[command(flatten)]
        certify: CertifyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Swap the singular part and imaginary constants of a candidate.
    Sibling {
        #[arg(long)]
        candidate: String,
        #[arg(long)]
        h: Option<String>,
        /// New atoms: inline JSON list or a file.
        #[arg(long, default_value = "[]")]
        atoms: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        imconst: Option<Vec<f64>>,
        #[command(flatten)]
        certify: CertifyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct ScanArgs {
    /// Number of sampled complex lines.
    #[arg(long, default_value_t = 500)]
    pub lines: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Raster resolution m (at least 64).
    #[arg(long, default_value_t = 256)]
    pub res: usize,
    /// Window half-width; defaults to 8 times the bounding-box diameter.
    #[arg(long)]
    pub window: Option<f64>,
}

#[derive(Subcommand, Debug)]
pub enum SemitubeCmd {
    /// Scan complex-line sections for components and holes.
    Scan {
        /// Built-in base (ball, dumbbell, slit_disc), inline JSON or a file.
        #[arg(long)]
        base: String,
        #[command(flatten)]
        scan: ScanArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Midpoint test of the base on random pairs.
    Convexity {
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fiber condition, convexity and section scan on one base.
    Harness {
        #[arg(long)]
        base: String,
        #[command(flatten)]
        scan: ScanArgs,
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
        /// Boundary points for the fiber check.
        #[arg(long, default_value_t = 50)]
        fiber_points: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Search separating subspaces through exterior points.
    Linconvex {
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Angular step of the normal grid, in degrees.
        #[arg(long, default_value_t = 2.0)]
        step_deg: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum UtilCmd {
    /// Serialize and re-read random payloads, checking byte-identical output.
    RoundtripTest {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn tolerance(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (1e-14..=1e-2).contains(&x) {
        Ok(x)
    } else {
        Err(format!("{x} is outside [1e-14, 1e-2]"))
    }
}
