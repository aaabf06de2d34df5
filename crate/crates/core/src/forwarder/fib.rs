//! Forwarding information base with longest-prefix match.

use thiserror::Error;

use crate::name::Name;
use crate::packet::FaceId;
use crate::time::SimTime;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibEntry {
    pub prefix: Name,
    pub face: FaceId,
    /// Installed by a reflexive indication; removed once matching Data passes or `expires_at` is reached.
    pub temporary: bool,
    pub expires_at: Option<SimTime>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibError {
    #[error("FIB already holds {prefix} -> {face}")]
    Duplicate { prefix: Name, face: FaceId },
}

#[derive(Debug, Clone, Default)]
pub struct Fib {
    entries: Vec<FibEntry>,
}

impl Fib {
    pub fn add(&mut self, prefix: Name, face: FaceId, temporary: bool, expires_at: Option<SimTime>) -> Result<(), FibError> {
        if self.entries.iter().any(|e| e.prefix == prefix && e.face == face) {
            return Err(FibError::Duplicate { prefix, face });
        }
        self.entries.push(FibEntry { prefix, face, temporary, expires_at });
        Ok(())
    }

    /// Installs or refreshes a temporary entry. A permanent entry for the same pair is left untouched.
    pub fn install_temporary(&mut self, prefix: Name, face: FaceId, expires_at: SimTime) {
        match self.entries.iter_mut().find(|e| e.prefix == prefix && e.face == face) {
            Some(e) if e.temporary => e.expires_at = Some(expires_at),
            Some(_) => {}
            None => self.entries.push(FibEntry { prefix, face, temporary: true, expires_at: Some(expires_at) }),
        }
    }

    /// Longest-prefix match. Among equally long prefixes, temporary entries win, then insertion order.
    pub fn lookup(&self, name: &Name) -> Option<FaceId> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.prefix.is_prefix_of(name))
            .max_by_key(|(idx, e)| (e.prefix.len(), e.temporary, std::cmp::Reverse(*idx)))
            .map(|(_, e)| e.face)
    }

    pub fn remove_temporary(&mut self, prefix: &Name) -> usize {
        let before = self.entries.len();
        self.entries.retain(|e| !(e.temporary && &e.prefix == prefix));
        before - self.entries.len()
    }

    pub fn remove_face_prefix(&mut self, prefix: &Name, face: FaceId) -> bool {
        let before = self.entries.len();
        self.entries.retain(|e| !(&e.prefix == prefix && e.face == face));
        before != self.entries.len()
    }

    pub fn expire(&mut self, now: SimTime) -> usize {
        let before = self.entries.len();
        self.entries.retain(|e| e.expires_at.is_none_or(|t| t > now));
        before - self.entries.len()
    }

    pub fn next_expiry(&self) -> Option<SimTime> {
        self.entries.iter().filter_map(|e| e.expires_at).min()
    }

    pub fn temporary_count(&self) -> usize {
        self.entries.iter().filter(|e| e.temporary).count()
    }

    pub fn entries(&self) -> &[FibEntry] {
        &self.entries
    }
}
