use std::net::SocketAddr;
use std::process::ExitCode;
use std::sync::Arc;

use codetutor_api::{router, AppState, ServerConfig};
use codetutor_core::bank::load_bank;
use codetutor_core::gateway::Gateway;

async fn shutdown_signal() {
    if let Err(e) = tokio::signal::ctrl_c().await {
        log::error!("cannot listen for shutdown signal: {e}");
    }
}

#[tokio::main]
async fn main() -> ExitCode {
    env_logger::init();
    let cfg = match ServerConfig::from_env() {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };
    let gateway = match Gateway::from_env() {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    };

    let state = Arc::new(AppState::from_config(gateway, &cfg));
    let app = router(state.clone(), cfg.cors_origin.as_deref());

    let addr = SocketAddr::from(([0, 0, 0, 0], cfg.port));
    let listener = match tokio::net::TcpListener::bind(addr).await {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: cannot bind {addr}: {e}");
            return ExitCode::FAILURE;
        }
    };
    log::info!("listening on {addr}");

    let bank_path = cfg.bank_path.clone();
    tokio::task::spawn_blocking(move || match load_bank(&bank_path) {
        Ok(bank) => {
            log::info!(
                "loaded {} exercises from {}",
                bank.exercise_count(),
                bank_path.display()
            );
            state.set_bank(bank);
        }
        Err(e) => {
            log::error!("{e}");
            state.fail_bank(e.to_string());
        }
    });

    let served = axum::serve(listener, app.into_make_service_with_connect_info::<SocketAddr>())
        .with_graceful_shutdown(shutdown_signal())
        .await;
    match served {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
