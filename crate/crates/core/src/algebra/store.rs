use std::collections::HashMap;
use std::sync::Mutex;

/// Persistent byte storage for memoized results, keyed by descriptive strings.
///
/// Implementations must never fail loudly: a missing or unreadable entry is a miss.
pub trait Store: Send + Sync + std::fmt::Debug {
    fn load(&self, key: &str) -> Option<Vec<u8>>;

    fn save(&self, key: &str, bytes: &[u8]);

    /// Called when a loaded entry does not decode or does not verify.
    fn corrupt(&self, key: &str);
}

/// An in-process store, mainly for tests.
#[derive(Debug, Default)]
pub struct MemoryStore {
    entries: Mutex<HashMap<String, Vec<u8>>>,
    corrupt: Mutex<Vec<String>>,
}

impl MemoryStore {
    pub fn len(&self) -> usize {
        self.entries.lock().expect("store lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn keys(&self) -> Vec<String> {
        let mut k: Vec<String> = self.entries.lock().expect("store lock").keys().cloned().collect();
        k.sort();
        k
    }

    pub fn poison(&self, key: &str, bytes: &[u8]) {
        self.entries.lock().expect("store lock").insert(key.to_string(), bytes.to_vec());
    }

    pub fn corrupted(&self) -> Vec<String> {
        self.corrupt.lock().expect("store lock").clone()
    }
}

impl Store for MemoryStore {
    fn load(&self, key: &str) -> Option<Vec<u8>> {
        self.entries.lock().expect("store lock").get(key).cloned()
    }

    fn save(&self, key: &str, bytes: &[u8]) {
        self.entries.lock().expect("store lock").insert(key.to_string(), bytes.to_vec());
    }

    fn corrupt(&self, key: &str) {
        self.corrupt.lock().expect("store lock").push(key.to_string());
    }
}
