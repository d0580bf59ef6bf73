//! Deterministic work distribution for seed-parallel scans.
//!
//! `NETMAP_THREADS` overrides the worker count. Results are always merged in
//! input order, so output never depends on scheduling.

use crate::Result;
use std::sync::atomic::{AtomicUsize, Ordering};

pub fn thread_count() -> usize {
    if let Ok(v) = std::env::var("NETMAP_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
        .min(8)
}

/// Apply `f` to every item, in parallel, returning results in input order.
/// The error for the smallest failing index wins, keeping failures
/// deterministic too.
pub fn map<T, R, F>(items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync,
{
    let workers = thread_count().min(items.len().max(1));
    if workers <= 1 {
        return items.iter().map(&f).collect();
    }
    let mut slots: Vec<Option<Result<R>>> = Vec::with_capacity(items.len());
    slots.resize_with(items.len(), || None);
    let cursor = AtomicUsize::new(0);
    let slot_ptr = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                let mut guard = slot_ptr.lock().unwrap();
                guard[i] = Some(r);
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every slot was filled"))
        .collect()
}
