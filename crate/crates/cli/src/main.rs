mod report;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use magnus_core::catalog;
use magnus_core::endgame::{decide_exceptional, equal_in_g, Certificate, Equality};
use magnus_core::pipeline::{dump_tokens, schreier_rewrite, BasisChange};
use magnus_core::surface::PresentationFile;
use magnus_core::{Budget, Word};

use report::AnalysisReport;

#[derive(Parser)]
#[command(name = "magnus", version, about = "Intersections of compatible Magnus subgroups in one-relator surface groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct BudgetArg {
    /// Scale factor (`0`, `1`, `3`) or `len=..,conj=..,count=..,states=..,candidates=..`.
    #[arg(long, env = Budget::ENV_VAR)]
    budget: Option<String>,
}

impl BudgetArg {
    fn resolve(&self) -> Result<Budget, String> {
        self.budget.as_deref().map_or(Ok(Budget::default()), Budget::parse)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a presentation file with a Magnus pair.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        budget: BudgetArg,
        #[arg(long)]
        json: bool,
        /// Also print the leveled rewrites.
        #[arg(long)]
        dump_leveled: bool,
    },
    /// Word problem: exact in the surface group, certificate search in G.
    Wp {
        file: PathBuf,
        word: String,
        #[arg(long, conflicts_with = "in_g")]
        in_sigma: bool,
        #[arg(long)]
        in_g: bool,
        #[command(flatten)]
        budget: BudgetArg,
    },
    /// Show the basis change making the relator's a1 and ak exponent sums vanish.
    Normalize {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Rewrite the normalized relator over the ak-kernel with chain elimination.
    Rewrite {
        file: PathBuf,
        /// Level kept for the last b generator (default: lowest occurring level).
        #[arg(long, allow_hyphen_values = true)]
        anchor: Option<i64>,
    },
    /// Verify a JSON certificate against a target word.
    Certify {
        file: PathBuf,
        /// Certificate JSON file, or `-` for stdin.
        certificate: PathBuf,
        #[arg(long)]
        target: String,
        /// Check in the free group instead of the surface group.
        #[arg(long)]
        free: bool,
    },
    /// Run the bundled instances and compare with their expected outcomes.
    Examples {
        name: Option<String>,
        #[command(flatten)]
        budget: BudgetArg,
    },
}

type CmdResult = Result<ExitCode, String>;

fn load(path: &Path) -> Result<PresentationFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    text.parse().map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_word(s: &str) -> Result<Word, String> {
    s.parse().map_err(|e| format!("word {s:?}: {e}"))
}

fn analyze(file: &Path, budget: &BudgetArg, json: bool, leveled: bool) -> CmdResult {
    let budget = budget.resolve()?;
    let f = load(file)?;
    let pair = f.pair.ok_or("file has no magnus1/magnus2 lines")?;
    let start = Instant::now();
    let d = decide_exceptional(&f.presentation, &pair, &budget).map_err(|e| e.to_string())?;
    let ms = start.elapsed().as_millis() as u64;
    let rep = AnalysisReport::new(&f.presentation, &pair, &d, budget, ms);
    if json {
        println!("{}", serde_json::to_string_pretty(&rep).map_err(|e| e.to_string())?);
    } else {
        println!("{}", rep.human(leveled));
    }
    Ok(ExitCode::from(rep.exit_code as u8))
}

fn wp(file: &Path, word: &str, in_g: bool, budget: &BudgetArg) -> CmdResult {
    let f = load(file)?;
    let w = parse_word(word)?;
    let pres = &f.presentation;
    if !in_g {
        println!("{}", pres.dehn_reduce(&w));
        return Ok(ExitCode::SUCCESS);
    }
    match equal_in_g(pres, &w, &Word::identity(), &budget.resolve()?) {
        Equality::Verified(c) => {
            println!("verified");
            println!("{}", serde_json::to_string(&c).map_err(|e| e.to_string())?);
            Ok(ExitCode::SUCCESS)
        }
        Equality::Refuted => {
            println!("not-in-closure (exponent sums)");
            Ok(ExitCode::SUCCESS)
        }
        Equality::Inconclusive => {
            println!("inconclusive");
            Ok(ExitCode::from(2))
        }
    }
}

fn normalize(file: &Path, json: bool) -> CmdResult {
    let f = load(file)?;
    let bc = BasisChange::compute(&f.presentation);
    if json {
        let v = serde_json::json!({
            "to_normalized": bc.to_normalized.to_string(),
            "to_original": bc.to_original.to_string(),
            "conjugator": bc.conjugator,
            "relator": bc.relator,
        });
        println!("{}", serde_json::to_string_pretty(&v).map_err(|e| e.to_string())?);
    } else {
        println!("to_normalized: {}", bc.to_normalized);
        println!("to_original:   {}", bc.to_original);
        println!("conjugator:    {}", bc.conjugator);
        println!("relator:       {}", bc.relator);
    }
    Ok(ExitCode::SUCCESS)
}

fn rewrite(file: &Path, anchor: Option<i64>) -> CmdResult {
    let f = load(file)?;
    let bc = BasisChange::compute(&f.presentation);
    let genus = f.presentation.genus();
    let lw = schreier_rewrite(&bc.relator, genus, anchor).map_err(|e| e.to_string())?;
    println!("{}", dump_tokens(&lw));
    Ok(ExitCode::SUCCESS)
}

fn certify(file: &Path, cert: &Path, target: &str, free: bool) -> CmdResult {
    let f = load(file)?;
    let mut text = String::new();
    if cert.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(|e| e.to_string())?;
    } else {
        text = std::fs::read_to_string(cert).map_err(|e| format!("{}: {e}", cert.display()))?;
    }
    let c: Certificate = serde_json::from_str(&text).map_err(|e| format!("certificate: {e}"))?;
    let target = parse_word(target)?;
    let ok = if free {
        c.verify_free(f.presentation.relator(), &target)
    } else {
        c.verify_in_surface(&f.presentation, &target)
    };
    if ok {
        println!("valid ({} factors)", c.len());
        Ok(ExitCode::SUCCESS)
    } else {
        println!("invalid");
        Ok(ExitCode::from(1))
    }
}

fn examples(name: Option<&str>, budget: &BudgetArg) -> CmdResult {
    let budget = budget.resolve()?;
    let selected: Vec<&catalog::Example> = match name {
        Some(n) => vec![catalog::example(n).ok_or_else(|| format!("unknown example {n:?}"))?],
        None => catalog::EXAMPLES.iter().collect(),
    };
    let mut all_pass = true;
    let mut summary = Vec::new();
    for ex in selected {
        println!("{}: {}", ex.name, ex.summary);
        let start = Instant::now();
        let checks = ex.check(&budget);
        let pass = checks.iter().all(|c| c.pass);
        for c in &checks {
            println!("  [{}] {}", if c.pass { "ok" } else { "FAIL" }, c.label);
            println!("      expected: {}", c.expected);
            println!("      actual:   {}", c.actual);
        }
        all_pass &= pass;
        summary.push((ex.name, pass, start.elapsed().as_millis()));
    }
    println!();
    println!("{:<20} {:<6} {:>8}", "example", "result", "ms");
    for (n, pass, ms) in summary {
        println!("{:<20} {:<6} {:>8}", n, if pass { "PASS" } else { "FAIL" }, ms);
    }
    Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match &cli.command {
        Command::Analyze { file, budget, json, dump_leveled } => analyze(file, budget, *json, *dump_leveled),
        Command::Wp { file, word, in_sigma: _, in_g, budget } => wp(file, word, *in_g, budget),
        Command::Normalize { file, json } => normalize(file, *json),
        Command::Rewrite { file, anchor } => rewrite(file, *anchor),
        Command::Certify { file, certificate, target, free } => certify(file, certificate, target, *free),
        Command::Examples { name, budget } => examples(name.as_deref(), budget),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
