use std::net::SocketAddr;
use std::path::PathBuf;

use clap::Parser;
use tracing_subscriber::EnvFilter;

use mediator_server::{serve, AppState};

/// Alert mediation service.
#[derive(Parser)]
#[command(name = "mediator-server", version)]
struct Args {
    /// Directory holding attention.json, costs.json, classifier.json, ...
    #[arg(long, default_value = "models")]
    model_dir: PathBuf,
    #[arg(long, default_value = "127.0.0.1:7878")]
    bind: SocketAddr,
}

#[tokio::main]
async fn main() {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .init();
    let args = Args::parse();

    let state = match AppState::load(&args.model_dir) {
        Ok(s) => s,
        Err(e) => {
            tracing::error!("cannot load models: {e}");
            std::process::exit(1);
        }
    };
    let listener = match tokio::net::TcpListener::bind(args.bind).await {
        Ok(l) => l,
        Err(e) => {
            tracing::error!("cannot bind {}: {e}", args.bind);
            std::process::exit(1);
        }
    };
    tracing::info!(model_dir = %args.model_dir.display(), "listening on {}", args.bind);
    let shutdown = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    if let Err(e) = serve(listener, state, shutdown).await {
        tracing::error!("server stopped: {e}");
        std::process::exit(1);
    }
}
