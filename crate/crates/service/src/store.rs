//! In-memory session table with optional on-disk persistence, one JSON file
//! per session, rewritten atomically after every change.

use std::collections::HashMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use tokio::sync::{Mutex, RwLock};

use crate::session::{Session, SessionRecord};

#[derive(Debug, Default)]
pub struct SessionStore {
    dir: Option<PathBuf>,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
}

impl SessionStore {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Opens `dir`, restoring every stored session by replaying its trace.
    /// Returns the store and the files that could not be restored.
    pub fn open(dir: &Path) -> io::Result<(Self, Vec<(PathBuf, String)>)> {
        fs::create_dir_all(dir)?;
        let mut sessions = HashMap::new();
        let mut skipped = Vec::new();
        for entry in fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().is_none_or(|e| e != "json") {
                continue;
            }
            let restored = fs::read_to_string(&path)
                .map_err(|e| e.to_string())
                .and_then(|text| serde_json::from_str::<SessionRecord>(&text).map_err(|e| e.to_string()))
                .and_then(|r| Session::from_record(r).map_err(|e| e.to_string()));
            match restored {
                Ok(s) => {
                    sessions.insert(s.id.clone(), Arc::new(Mutex::new(s)));
                }
                Err(e) => skipped.push((path, e)),
            }
        }
        Ok((SessionStore { dir: Some(dir.to_path_buf()), sessions: RwLock::new(sessions) }, skipped))
    }

    pub async fn insert(&self, session: Session) -> io::Result<Arc<Mutex<Session>>> {
        self.persist(&session)?;
        let id = session.id.clone();
        let handle = Arc::new(Mutex::new(session));
        self.sessions.write().await.insert(id, handle.clone());
        Ok(handle)
    }

    pub async fn get(&self, id: &str) -> Option<Arc<Mutex<Session>>> {
        self.sessions.read().await.get(id).cloned()
    }

    pub async fn len(&self) -> usize {
        self.sessions.read().await.len()
    }

    pub async fn is_empty(&self) -> bool {
        self.len().await == 0
    }

    pub fn persist(&self, session: &Session) -> io::Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        let json = serde_json::to_vec_pretty(&session.to_record()).map_err(io::Error::other)?;
        let tmp = dir.join(format!(".{}.json.tmp", session.id));
        fs::write(&tmp, json)?;
        fs::rename(&tmp, dir.join(format!("{}.json", session.id)))
    }
}
