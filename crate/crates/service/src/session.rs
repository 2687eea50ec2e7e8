use std::collections::HashMap;
use std::sync::{Arc, Mutex as StdMutex};
use std::time::{Duration, Instant};

use argseg_core::{watershed, RasterImage, RegionPartition, SegmentationResult, StrokeSet, WatershedParams};
use tokio::sync::Mutex;

pub struct Session {
    pub image: Arc<RasterImage>,
    /// Keyed by smoothing radius; the image never changes within a session.
    partitions: HashMap<u32, Arc<RegionPartition>>,
    pub latest_strokes: Option<StrokeSet>,
    pub latest_result: Option<SegmentationResult>,
    pub created_at: Instant,
}

impl Session {
    pub fn new(image: RasterImage) -> Self {
        Session {
            image: Arc::new(image),
            partitions: HashMap::new(),
            latest_strokes: None,
            latest_result: None,
            created_at: Instant::now(),
        }
    }

    pub fn partition(&mut self, params: WatershedParams) -> Arc<RegionPartition> {
        let image = &self.image;
        self.partitions
            .entry(params.smoothing_radius())
            .or_insert_with(|| Arc::new(watershed(image, params)))
            .clone()
    }
}

struct Entry {
    session: Arc<Mutex<Session>>,
    last_used: Instant,
}

/// Sessions by id. The map lock is only held to look up, insert or purge;
/// work on a session happens under that session's own lock.
pub struct SessionStore {
    ttl: Duration,
    entries: StdMutex<HashMap<String, Entry>>,
}

impl SessionStore {
    pub fn new(ttl: Duration) -> Self {
        SessionStore { ttl, entries: StdMutex::new(HashMap::new()) }
    }

    pub fn insert(&self, session: Session) -> (String, Arc<Mutex<Session>>) {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let session = Arc::new(Mutex::new(session));
        let mut entries = self.lock();
        self.purge(&mut entries);
        entries.insert(id.clone(), Entry { session: session.clone(), last_used: Instant::now() });
        (id, session)
    }

    pub fn get(&self, id: &str) -> Option<Arc<Mutex<Session>>> {
        let mut entries = self.lock();
        self.purge(&mut entries);
        let entry = entries.get_mut(id)?;
        entry.last_used = Instant::now();
        Some(entry.session.clone())
    }

    pub fn remove(&self, id: &str) -> bool {
        let mut entries = self.lock();
        self.purge(&mut entries);
        entries.remove(id).is_some()
    }

    pub fn len(&self) -> usize {
        self.lock().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn purge(&self, entries: &mut HashMap<String, Entry>) {
        let now = Instant::now();
        entries.retain(|_, e| now.duration_since(e.last_used) < self.ttl);
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, HashMap<String, Entry>> {
        self.entries.lock().unwrap_or_else(|e| e.into_inner())
    }
}
