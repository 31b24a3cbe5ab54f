use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mip_core::baselines::{brute_force_mine, collect_stats, utility_list_mine, Population};
use mip_core::datagen::{generate, GenSpec};
use mip_core::io::{
    read_native, read_spmf, render_itemsets, stats_csv_row, write_transactions, write_utility_table, StatsRow,
    STATS_CSV_HEADER,
};
use mip_core::{mine, Error, ItemOrder, MinerConfig, Precision, Threshold, UtilityDatabase};

const EXIT_INVALID: u8 = 2;
const EXIT_OVERFLOW: u8 = 3;
const EXIT_CONFLICT: u8 = 4;
const EXIT_BOUND: u8 = 5;

#[derive(Parser)]
#[command(name = "mip", version, about = "Mine high-utility itemsets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine with the prefix-tree miner
    Mine {
        #[command(flatten)]
        common: Common,
        /// Skip extensions of single items whose utility plus anterior utility misses the threshold
        #[arg(long)]
        prune_singletons: bool,
        /// Disable the per-node cursor used when building 2-itemset lists
        #[arg(long)]
        no_mark: bool,
    },
    /// Mine by exhaustive enumeration (small datasets only)
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Refuse datasets with more occurring items than this
        #[arg(long, default_value_t = mip_core::baselines::DEFAULT_ENUMERATION_BOUND)]
        max_items: usize,
    },
    /// Mine with the utility-list miner
    Baseline {
        #[command(flatten)]
        common: Common,
    },
    /// Run both list-based miners and print a CSV row of list sizes and timings
    Stats {
        #[command(flatten)]
        common: Common,
        /// Itemsets the averages are taken over
        #[arg(long, value_enum, default_value_t = PopulationArg::Emitted)]
        population: PopulationArg,
        /// Dataset label for the CSV row (defaults to the input file stem)
        #[arg(long)]
        dataset: Option<String>,
        /// Omit the CSV header line
        #[arg(long)]
        no_header: bool,
    },
    /// Generate a synthetic dataset in the native format
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        items: u32,
        #[arg(long)]
        transactions: u32,
        #[arg(long)]
        avg_len: u32,
        /// Writes `<prefix>-utility.txt` and `<prefix>-transactions.txt`
        #[arg(long)]
        out_prefix: PathBuf,
        /// Popularity skew: item k is drawn with weight (k+1)^-skew
        #[arg(long, default_value_t = 1.0)]
        skew: f64,
        #[arg(long, default_value_t = 2)]
        precision: u32,
    },
}

#[derive(Args)]
struct Common {
    /// Transactions file (native) or the single SPMF file
    #[arg(long)]
    input: PathBuf,
    /// External utility table, required for the native format
    #[arg(long)]
    utility_table: Option<PathBuf>,
    /// Absolute minimum utility
    #[arg(long, required_unless_present = "min_util_pct", conflicts_with = "min_util_pct")]
    min_util: Option<String>,
    /// Minimum utility as a percentage of the total utility
    #[arg(long)]
    min_util_pct: Option<String>,
    #[arg(long, value_enum, default_value_t = OrderArg::Support)]
    order: OrderArg,
    #[arg(long, value_enum, default_value_t = FormatArg::Native)]
    format: FormatArg,
    /// Write results here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    /// Decimal digits for utilities (native format; inferred from the table by default)
    #[arg(long)]
    precision: Option<u32>,
}

#[derive(Copy, Clone, ValueEnum)]
enum OrderArg {
    Support,
    Twu,
}

#[derive(Copy, Clone, ValueEnum)]
enum FormatArg {
    Native,
    Spmf,
}

#[derive(Copy, Clone, ValueEnum)]
enum PopulationArg {
    Emitted,
    Explored,
}

struct Loaded {
    db: UtilityDatabase,
    threshold: Threshold,
    threshold_label: String,
    order: ItemOrder,
}

impl Common {
    /// Flag combinations clap cannot express on its own.
    fn conflict(&self) -> Option<&'static str> {
        match self.format {
            FormatArg::Spmf if self.utility_table.is_some() => {
                Some("--utility-table cannot be used with --format spmf")
            }
            FormatArg::Spmf if self.precision.is_some() => Some("--precision cannot be used with --format spmf"),
            _ => None,
        }
    }

    fn load(&self) -> Result<Loaded, Error> {
        let db = match self.format {
            FormatArg::Spmf => read_spmf(&self.input)?,
            FormatArg::Native => {
                let table = self
                    .utility_table
                    .as_deref()
                    .ok_or_else(|| Error::Invalid("--utility-table is required for the native format".into()))?;
                let precision = self.precision.map(Precision::new).transpose()?;
                read_native(table, &self.input, precision)?.to_utility_database()?
            }
        };
        let (threshold, threshold_label) = match (&self.min_util, &self.min_util_pct) {
            (Some(abs), _) => {
                let amount = db
                    .precision()
                    .parse(abs)
                    .map_err(|m| Error::Invalid(format!("--min-util: {m}")))?;
                (Threshold::Absolute(amount), abs.clone())
            }
            (None, Some(pct)) => (Threshold::from_percent(pct)?, format!("{pct}%")),
            (None, None) => unreachable!("clap requires one threshold flag"),
        };
        let order = match self.order {
            OrderArg::Support => ItemOrder::SupportDesc,
            OrderArg::Twu => ItemOrder::TwuDesc,
        };
        Ok(Loaded {
            db,
            threshold,
            threshold_label,
            order,
        })
    }

    fn emit(&self, text: &str) -> Result<(), Error> {
        match &self.output {
            Some(path) => std::fs::write(path, text).map_err(|e| Error::from(e).in_file(path)),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                out.flush()?;
                Ok(())
            }
        }
    }
}

fn peak_rss_kb() -> u64 {
    std::fs::read_to_string("/proc/self/status")
        .ok()
        .and_then(|s| {
            s.lines()
                .find_map(|l| l.strip_prefix("VmHWM:"))
                .and_then(|v| v.trim().trim_end_matches("kB").trim().parse().ok())
        })
        .unwrap_or(0)
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Mine {
            common,
            prune_singletons,
            no_mark,
        } => {
            let l = common.load()?;
            let cfg = MinerConfig {
                prune_singletons,
                use_mark_optimization: !no_mark,
                ..MinerConfig::new(l.threshold).with_order(l.order)
            };
            let outcome = mine(&l.db, &cfg)?;
            common.emit(&render_itemsets(&outcome.itemsets, l.db.catalog(), l.db.precision()))
        }
        Command::Oracle { common, max_items } => {
            let l = common.load()?;
            let found = brute_force_mine(&l.db, &l.threshold, max_items)?;
            common.emit(&render_itemsets(&found, l.db.catalog(), l.db.precision()))
        }
        Command::Baseline { common } => {
            let l = common.load()?;
            let outcome = utility_list_mine(&l.db, &MinerConfig::new(l.threshold).with_order(l.order))?;
            common.emit(&render_itemsets(&outcome.itemsets, l.db.catalog(), l.db.precision()))
        }
        Command::Stats {
            common,
            population,
            dataset,
            no_header,
        } => {
            let l = common.load()?;
            let stats = collect_stats(&l.db, &MinerConfig::new(l.threshold).with_order(l.order))?;
            let dataset = dataset.unwrap_or_else(|| {
                common
                    .input
                    .file_stem()
                    .map_or_else(String::new, |s| s.to_string_lossy().into_owned())
            });
            let row = stats_csv_row(&StatsRow {
                dataset: &dataset,
                threshold: &l.threshold_label,
                order: l.order,
                population: match population {
                    PopulationArg::Emitted => Population::Emitted,
                    PopulationArg::Explored => Population::Explored,
                },
                stats: &stats,
                peak_rss_kb: peak_rss_kb(),
            });
            let mut text = String::new();
            if !no_header {
                text.push_str(STATS_CSV_HEADER);
                text.push('\n');
            }
            text.push_str(&row);
            text.push('\n');
            common.emit(&text)
        }
        Command::Gen {
            seed,
            items,
            transactions,
            avg_len,
            out_prefix,
            skew,
            precision,
        } => {
            let spec = GenSpec {
                seed,
                n_items: items,
                n_transactions: transactions,
                avg_tx_len: avg_len,
                skew,
                precision: Precision::new(precision)?,
                ..GenSpec::default()
            };
            let db = generate(&spec)?;
            let write = |suffix: &str, text: String| {
                let path = with_suffix(&out_prefix, suffix);
                std::fs::write(&path, text).map_err(|e| Error::from(e).in_file(&path))
            };
            write("-utility.txt", write_utility_table(&db))?;
            write("-transactions.txt", write_transactions(&db))
        }
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn exit_code(e: &Error) -> u8 {
    match e.root() {
        Error::Overflow(_) => EXIT_OVERFLOW,
        Error::EnumerationBound { .. } => EXIT_BOUND,
        _ => EXIT_INVALID,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                clap::error::ErrorKind::ArgumentConflict => EXIT_CONFLICT,
                _ => EXIT_INVALID,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let common = match &cli.command {
        Command::Mine { common, .. }
        | Command::Oracle { common, .. }
        | Command::Baseline { common }
        | Command::Stats { common, .. } => Some(common),
        Command::Gen { .. } => None,
    };
    if let Some(message) = common.and_then(Common::conflict) {
        eprintln!("error: {message}");
        return ExitCode::from(EXIT_CONFLICT);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
