//! HTTP facade over `swift-core`: catalog browsing, Choose Box search,
//! editing sessions, hints and the sign store.

use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::Duration;

use anyhow::Context;
use swift_core::hints::DEFAULT_TAU;
use swift_core::{load_catalog, Catalog, CooccurrenceTable, SignStore};

pub mod api;
pub mod error;
pub mod session;

pub use api::router;
use session::Sessions;

pub const DEFAULT_HINT_LIMIT: usize = 50;
pub const DEFAULT_PAGE: usize = 50;
pub const MAX_PAGE: usize = 500;
pub const DEFAULT_SESSION_TTL: Duration = Duration::from_secs(60 * 60);

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub catalog_path: PathBuf,
    pub store_path: PathBuf,
    pub tau: u64,
    pub hint_limit: usize,
    pub session_ttl: Duration,
}

impl ServerConfig {
    pub fn new(catalog_path: impl Into<PathBuf>, store_path: impl Into<PathBuf>) -> Self {
        ServerConfig {
            catalog_path: catalog_path.into(),
            store_path: store_path.into(),
            tau: DEFAULT_TAU,
            hint_limit: DEFAULT_HINT_LIMIT,
            session_ttl: DEFAULT_SESSION_TTL,
        }
    }
}

/// Everything the handlers share. Cheap to clone.
#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    catalog: Catalog,
    store: Mutex<SignStore>,
    sessions: Sessions,
    tau: u64,
    hint_limit: usize,
}

pub fn read_catalog(path: &Path) -> anyhow::Result<Catalog> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read catalog {}", path.display()))?;
    load_catalog(&text).with_context(|| format!("invalid catalog {}", path.display()))
}

pub fn open_store(path: &Path, catalog: &Catalog) -> anyhow::Result<SignStore> {
    SignStore::open(path, catalog).with_context(|| format!("cannot open store {}", path.display()))
}

impl AppState {
    /// Loads the catalog and replays the store, rebuilding the hint table.
    pub fn load(config: &ServerConfig) -> anyhow::Result<Self> {
        anyhow::ensure!(config.tau >= 1, "tau must be at least 1");
        anyhow::ensure!(config.hint_limit >= 1, "hint limit must be at least 1");
        let catalog = read_catalog(&config.catalog_path)?;
        let store = open_store(&config.store_path, &catalog)?;
        for id in store.corrupt_ids() {
            tracing::warn!(record = id, "skipping corrupt store record");
        }
        Ok(Self::from_parts(catalog, store, config))
    }

    pub fn from_parts(catalog: Catalog, store: SignStore, config: &ServerConfig) -> Self {
        AppState {
            inner: Arc::new(Inner {
                catalog,
                store: Mutex::new(store),
                sessions: Sessions::new(config.session_ttl),
                tau: config.tau,
                hint_limit: config.hint_limit,
            }),
        }
    }

    pub fn catalog(&self) -> &Catalog {
        &self.inner.catalog
    }

    pub fn sessions(&self) -> &Sessions {
        &self.inner.sessions
    }

    pub fn tau(&self) -> u64 {
        self.inner.tau
    }

    pub fn hint_limit(&self) -> usize {
        self.inner.hint_limit
    }

    /// Runs `f` with exclusive access to the store.
    pub fn with_store<T>(&self, f: impl FnOnce(&mut SignStore) -> T) -> T {
        let mut store = self.inner.store.lock().unwrap();
        f(&mut store)
    }

    /// Snapshot of the live hint table; never observes a half-applied save.
    pub fn table(&self) -> Arc<CooccurrenceTable> {
        self.with_store(|s| s.table())
    }
}
