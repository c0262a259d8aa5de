use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use swift_core::{export_svg, serialize_text};
use swift_server::{open_store, read_catalog, router, AppState, ServerConfig};
use tower_http::cors::{Any, CorsLayer};
use tower_http::services::ServeDir;

#[derive(Parser)]
#[command(name = "swift", version, about = "SignWriting glyph editor backend")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the HTTP API.
    Serve(ServeArgs),
    /// Load a catalog file and report problems.
    ValidateCatalog { path: PathBuf },
    /// Print a stored sign as SWT1 text or SVG.
    Export {
        id: String,
        #[arg(long, value_enum, default_value = "swt")]
        fmt: Format,
        #[arg(long)]
        crop: bool,
        #[command(flatten)]
        data: DataArgs,
    },
    /// Summarize the store and its co-occurrence table.
    Stats {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
}

#[derive(clap::Args)]
struct DataArgs {
    #[arg(long, env = "SWIFT_CATALOG")]
    catalog: PathBuf,
    #[arg(long, env = "SWIFT_STORE")]
    store: PathBuf,
}

#[derive(clap::Args)]
struct ServeArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, env = "SWIFT_BIND", default_value = "127.0.0.1")]
    bind: std::net::IpAddr,
    #[arg(long, env = "SWIFT_PORT", default_value_t = 8080)]
    port: u16,
    /// Minimum pair count for a hint.
    #[arg(long, env = "SWIFT_TAU", default_value_t = swift_core::hints::DEFAULT_TAU)]
    tau: u64,
    #[arg(long, env = "SWIFT_HINT_LIMIT", default_value_t = swift_server::DEFAULT_HINT_LIMIT)]
    hint_limit: usize,
    #[arg(long, env = "SWIFT_SESSION_TTL_MINS", default_value_t = 60)]
    session_ttl_mins: u64,
    /// Allowed CORS origin; `*` allows any.
    #[arg(long, env = "SWIFT_CORS_ORIGIN")]
    cors_origin: Option<String>,
    /// Directory of static editor assets served at `/`.
    #[arg(long, env = "SWIFT_STATIC_DIR")]
    static_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Swt,
    Svg,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Serve(args) => serve(args).map(|_| ExitCode::SUCCESS),
        Command::ValidateCatalog { path } => {
            let catalog = read_catalog(&path)?;
            println!(
                "{} {}: {} categories, {} glyphs",
                catalog.name(),
                catalog.version(),
                catalog.categories().len(),
                catalog.len()
            );
            if let Err(missing) = catalog.check_editor_coverage() {
                for m in missing {
                    println!("warning: missing {m}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Export { id, fmt, crop, data } => {
            let catalog = read_catalog(&data.catalog)?;
            let store = open_store(&data.store, &catalog)?;
            let record = store.load(&id)?;
            let out = match fmt {
                Format::Swt => serialize_text(&record.sign),
                Format::Svg => export_svg(&record.sign, &catalog, crop)?,
            };
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(out.as_bytes())?;
            stdout.write_all(b"\n")?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Stats { data, top } => {
            let catalog = read_catalog(&data.catalog)?;
            let store = open_store(&data.store, &catalog)?;
            let table = store.table();
            println!("signs: {}", store.len());
            println!("corrupt: {}", store.corrupt_ids().len());
            println!("distinct bases: {}", table.unary_counts().count());
            println!("distinct pairs: {}", table.pairs().count());
            for (a, b, n) in table.top_pairs(top) {
                println!("{n:>6}  {a} + {b}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn serve(args: ServeArgs) -> anyhow::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env()
                .unwrap_or_else(|_| "info,tower_http=warn".into()),
        )
        .init();

    let mut config = ServerConfig::new(args.data.catalog, args.data.store);
    config.tau = args.tau;
    config.hint_limit = args.hint_limit;
    config.session_ttl = Duration::from_secs(args.session_ttl_mins.max(1) * 60);
    let state = AppState::load(&config)?;
    tracing::info!(
        catalog = state.catalog().name(),
        glyphs = state.catalog().len(),
        signs = state.table().sign_total(),
        "loaded"
    );

    let mut app = router(state.clone());
    if let Some(dir) = &args.static_dir {
        app = app.fallback_service(ServeDir::new(dir));
    }
    if let Some(origin) = &args.cors_origin {
        let cors = CorsLayer::new().allow_methods(Any).allow_headers(Any);
        let cors = if origin == "*" {
            cors.allow_origin(Any)
        } else {
            cors.allow_origin(
                origin
                    .parse::<axum::http::HeaderValue>()
                    .context("invalid --cors-origin")?,
            )
        };
        app = app.layer(cors);
    }

    let addr = SocketAddr::new(args.bind, args.port);
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async move {
        let sweeper = state.clone();
        tokio::spawn(async move {
            let mut tick = tokio::time::interval(Duration::from_secs(60));
            loop {
                tick.tick().await;
                sweeper.sessions().sweep();
            }
        });
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .with_context(|| format!("cannot bind {addr}"))?;
        tracing::info!(%addr, "listening");
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        anyhow::Ok(())
    })
}
