//! Run the HTTP service on a local port and call it.
//!
//! ```sh
//! cargo run --example http_service
//! curl -s localhost:8787/api/model | head
//! ```
//!
//! Stop with Ctrl-C.

use webxr_spl::interface::service::{serve, ServiceConfig};

#[tokio::main]
async fn main() {
    let mut config = ServiceConfig::new("127.0.0.1:8787");
    config.apply_env(|k| std::env::var(k).ok());
    println!("serving on http://{}", config.listen_address);
    let stop = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    if let Err(e) = serve(config, stop).await {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
