use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bigkey_fpe::bigkey::{KeyHeader, RngBytes};
use bigkey_fpe::bounds::{
    gamma_curve, log_spaced, naive_adv_lower, theorem1_terms, write_gamma_csv, BoundInputs, Variant,
};
use bigkey_fpe::oracle::SHAKE256_ID;
use bigkey_fpe::verify::{run_suite, Summary, SUITE_NAMES};
use bigkey_fpe::{BigKey, BitString, Cipher, CipherParams, Error, Shake256Oracle};
use clap::{Args, Parser, Subcommand};
use rand::rngs::OsRng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

const EXIT_USAGE: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_VERIFY: u8 = 3;

/// Big-key format-preserving encryption, bound calculator and verification suites.
#[derive(Parser, Debug)]
#[command(name = "bkfpe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a key file of N random bits.
    Keygen {
        /// Key length N in bits (accepts 2^x).
        #[arg(long = "bits", value_parser = parse_u64)]
        n_bits: u64,
        #[arg(long, env = "BKFPE_KEY")]
        out: PathBuf,
        /// Derive the key from a ChaCha20 stream with this seed instead of the
        /// OS generator. Reproducible, for testing only.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Encrypt a hex-encoded m-bit message.
    Encrypt(CipherArgs),
    /// Decrypt a hex-encoded m-bit ciphertext.
    Decrypt(CipherArgs),
    /// Evaluate the advantage bound and the naive-adversary lower bound.
    Bounds {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Known plaintext/ciphertext pairs q (accepts 2^x).
        #[arg(long, value_parser = parse_real)]
        queries: f64,
        /// Adversary oracle calls p (accepts 2^x).
        #[arg(long, value_parser = parse_real, default_value = "0")]
        oracle_calls: f64,
        /// Use the closed-form bound on the inverse entropy.
        #[arg(long)]
        closed_form: bool,
    },
    /// Write the curve -log2 Γ(q) as CSV.
    Curve {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, value_parser = parse_real, default_value = "2^10")]
        q_from: f64,
        #[arg(long, value_parser = parse_real, default_value = "2^40")]
        q_to: f64,
        #[arg(long, default_value_t = 64)]
        points: usize,
        /// Output path; standard output when absent.
        #[arg(long, env = "BKFPE_CURVE_OUT")]
        out: Option<PathBuf>,
    },
    /// Run the verification suites.
    Verify {
        /// Run every suite (the default).
        #[arg(long, conflicts_with = "suite")]
        all: bool,
        /// Run only the named suite; may be repeated.
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITE_NAMES))]
        suite: Vec<String>,
        /// Also write a JSON summary to this path.
        #[arg(long, env = "BKFPE_REPORT")]
        json: Option<PathBuf>,
        /// Print only failing checks and per-suite totals.
        #[arg(long)]
        quiet: bool,
    },
}

#[derive(Args, Debug)]
struct CipherArgs {
    #[arg(long, env = "BKFPE_KEY")]
    key: PathBuf,
    /// Message length m in bits.
    #[arg(long = "bits")]
    msg_bits: usize,
    /// Probes per round k.
    #[arg(long = "probes")]
    num_probes: usize,
    /// Passes s; rounds are T = s(2m - 1).
    #[arg(long, required_unless_present = "rounds", conflicts_with = "rounds")]
    passes: Option<u64>,
    /// Explicit round count T.
    #[arg(long)]
    rounds: Option<u64>,
    /// Input as hex, most significant bit first.
    #[arg(long = "in")]
    input: String,
}

#[derive(Args, Debug)]
struct SchemeArgs {
    /// Key length N in bits (accepts 2^x).
    #[arg(long = "n", value_parser = parse_u64, default_value = "2^43")]
    n_bits: u64,
    /// Leaked bits l (accepts 2^x).
    #[arg(long, value_parser = parse_u64, default_value = "2^40")]
    leak: u64,
    /// Message length m in bits.
    #[arg(long = "bits", default_value_t = 128)]
    msg_bits: u32,
    /// Probes per round k.
    #[arg(long = "probes", default_value_t = 500)]
    num_probes: u64,
    /// Passes s.
    #[arg(long, default_value_t = 2)]
    passes: u64,
}

impl SchemeArgs {
    fn inputs(&self, queries: f64, oracle_calls: f64) -> BoundInputs {
        BoundInputs::new(
            self.n_bits,
            self.leak,
            self.msg_bits,
            self.num_probes,
            self.passes,
            queries,
            oracle_calls,
        )
    }
}

enum Failure {
    Usage(String),
    Io(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_)
            | Error::DomainTooSmall(_)
            | Error::KeyTooSmall(_)
            | Error::LengthMismatch { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Io(e.to_string()),
        }
    }
}

impl Failure {
    fn context(self, what: impl std::fmt::Display) -> Self {
        match self {
            Failure::Usage(m) => Failure::Usage(format!("{what}: {m}")),
            Failure::Io(m) => Failure::Io(format!("{what}: {m}")),
            Failure::Verification(m) => Failure::Verification(format!("{what}: {m}")),
        }
    }
}

trait Context<T> {
    fn context(self, what: impl std::fmt::Display) -> CliResult<T>;
}

impl<T, E: Into<Failure>> Context<T> for Result<T, E> {
    fn context(self, what: impl std::fmt::Display) -> CliResult<T> {
        self.map_err(|e| e.into().context(what))
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, Failure>;

/// Integer or `2^x`.
fn parse_u64(s: &str) -> Result<u64, String> {
    match s.trim().split_once('^') {
        Some(("2", e)) => {
            let e: u32 = e.parse().map_err(|_| format!("bad exponent in {s:?}"))?;
            1u64.checked_shl(e)
                .filter(|_| e < 64)
                .ok_or_else(|| format!("{s} exceeds 64 bits"))
        }
        Some(_) => Err(format!("only powers of two are accepted in {s:?}")),
        None => s
            .trim()
            .parse()
            .map_err(|_| format!("{s:?} is not a nonnegative integer")),
    }
}

/// Decimal or `2^x`, finite and nonnegative.
fn parse_real(s: &str) -> Result<f64, String> {
    let v = match s.trim().split_once('^') {
        Some(("2", e)) => e
            .parse::<f64>()
            .map(f64::exp2)
            .map_err(|_| format!("bad exponent in {s:?}"))?,
        Some(_) => return Err(format!("only powers of two are accepted in {s:?}")),
        None => s
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("{s:?} is not a number"))?,
    };
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("{s:?} must be finite and nonnegative"))
    }
}

fn keygen(n_bits: u64, out: &PathBuf, seed: Option<u64>) -> CliResult {
    let header = KeyHeader::new(n_bits, SHAKE256_ID).context("--bits")?;
    match seed {
        Some(seed) => BigKey::generate_to_file(
            out,
            &header,
            &mut RngBytes(ChaCha20Rng::seed_from_u64(seed)),
        ),
        None => BigKey::generate_to_file(out, &header, &mut RngBytes(OsRng)),
    }
    .context(format!("--out {}", out.display()))?;
    eprintln!("wrote {n_bits}-bit key to {}", out.display());
    Ok(())
}

fn run_cipher(args: &CipherArgs, decrypt: bool) -> CliResult {
    let rounds = match (args.passes, args.rounds) {
        (Some(s), _) => s
            .checked_mul((2 * args.msg_bits as u64).saturating_sub(1))
            .ok_or_else(|| Failure::Usage("--passes: round count overflows".into()))?,
        (None, Some(t)) => {
            eprintln!("warning: --rounds overrides T = s(2m - 1); the security bound assumes the derived round count");
            t
        }
        (None, None) => {
            return Err(Failure::Usage(
                "one of --passes or --rounds is required".into(),
            ))
        }
    };
    // Validate everything that does not depend on the key before touching disk.
    CipherParams::with_rounds(1, args.msg_bits, args.num_probes, rounds)
        .context("--bits/--probes/--passes/--rounds")?;
    let input = BitString::from_hex(&args.input, args.msg_bits)
        .map_err(|e| Failure::Io(format!("--in: {e}")))?;

    let key =
        BigKey::open(&args.key, SHAKE256_ID).context(format!("--key {}", args.key.display()))?;
    let params = match args.passes {
        Some(s) => CipherParams::with_passes(key.n_bits(), args.msg_bits, args.num_probes, s)?,
        None => CipherParams::with_rounds(key.n_bits(), args.msg_bits, args.num_probes, rounds)?,
    };
    let oracle = Shake256Oracle::new();
    let cipher = Cipher::new(&key, &oracle, params)?;
    let output = if decrypt {
        cipher.decrypt(&input)?
    } else {
        cipher.encrypt(&input)?
    };
    println!("{}", output.to_hex());
    Ok(())
}

fn bounds(scheme: &SchemeArgs, queries: f64, oracle_calls: f64, closed_form: bool) -> CliResult {
    let b = scheme.inputs(queries, oracle_calls);
    let variant = if closed_form {
        Variant::ClosedForm
    } else {
        Variant::ExactInverse
    };
    let terms = theorem1_terms(&b, variant)?;
    let naive = naive_adv_lower(&b)?;
    println!("rounds          {}", b.rounds);
    println!("alpha           {:e}", b.alpha());
    println!("mixing          {:e}", terms.mixing);
    println!("probing         {:e}", terms.probing);
    println!("oracle          {:e}", terms.oracle);
    println!("collision       {:e}", terms.collision);
    println!("gamma           {:e}", terms.gamma());
    println!("upper_bound     {:e}", terms.total);
    println!("log2_upper      {:.6}", terms.log2_total);
    println!("naive_lower     {:e}", naive.simple);
    println!("naive_sharper   {:e}", naive.sharper);
    if !naive.hypothesis_holds {
        eprintln!("warning: q*floor(l/m) exceeds 2^m; naive_lower is not a valid lower bound here");
    }
    Ok(())
}

fn curve(
    scheme: &SchemeArgs,
    from: f64,
    to: f64,
    points: usize,
    out: Option<&PathBuf>,
) -> CliResult {
    let qs = log_spaced(from, to, points).context("--q-from/--q-to/--points")?;
    let rows = gamma_curve(&scheme.inputs(from, 0.0), &qs);
    match out {
        Some(path) => {
            let mut w =
                BufWriter::new(File::create(path).context(format!("--out {}", path.display()))?);
            write_gamma_csv(&rows, &mut w)?;
            w.flush()?;
        }
        None => write_gamma_csv(&rows, io::stdout().lock())?,
    }
    Ok(())
}

fn verify(suites: &[String], json: Option<&PathBuf>, quiet: bool) -> CliResult {
    let names: Vec<&str> = if suites.is_empty() {
        SUITE_NAMES.to_vec()
    } else {
        suites.iter().map(String::as_str).collect()
    };
    let mut all = Vec::new();
    let mut stdout = io::stdout().lock();
    for name in names {
        let checks = run_suite(name)?;
        let passed = checks.iter().filter(|c| c.pass).count();
        for c in checks.iter().filter(|c| !quiet || !c.pass) {
            writeln!(stdout, "{c}")?;
        }
        let verdict = if passed == checks.len() {
            "PASS"
        } else {
            "FAIL"
        };
        writeln!(stdout, "suite {name}: {verdict} {passed}/{}", checks.len())?;
        all.extend(checks);
    }
    let summary = Summary::new(all);
    writeln!(
        stdout,
        "total: {} passed, {} failed",
        summary.passed, summary.failed
    )?;
    if let Some(path) = json {
        std::fs::write(path, summary.to_json()).context(format!("--json {}", path.display()))?;
    }
    if summary.all_passed() {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "{} checks failed",
            summary.failed
        )))
    }
}

fn run(cli: Cli) -> CliResult {
    match &cli.command {
        Command::Keygen { n_bits, out, seed } => keygen(*n_bits, out, *seed),
        Command::Encrypt(args) => run_cipher(args, false),
        Command::Decrypt(args) => run_cipher(args, true),
        Command::Bounds {
            scheme,
            queries,
            oracle_calls,
            closed_form,
        } => bounds(scheme, *queries, *oracle_calls, *closed_form),
        Command::Curve {
            scheme,
            q_from,
            q_to,
            points,
            out,
        } => curve(scheme, *q_from, *q_to, *points, out.as_ref()),
        Command::Verify {
            all: _,
            suite,
            json,
            quiet,
        } => verify(suite, json.as_ref(), *quiet),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}
