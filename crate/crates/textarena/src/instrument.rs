//! Thread-local allocation tracking.
//!
//! With the `count-alloc` feature (default) the crate installs a global
//! allocator shim that forwards to the system allocator while keeping
//! per-thread counters: allocation events and a live-byte high-water mark.
//! Counting only ever observes the current thread, so concurrent builds on
//! other threads do not pollute a scope.

/// Allocation totals observed inside one [`track_scope`] call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScopeTotals {
    /// Allocation and reallocation events (deallocations are not events).
    pub alloc_events: u64,
    /// Peak live heap bytes requested during the scope, measured relative to
    /// the bytes live when the scope began.
    pub peak_bytes: u64,
}

/// Whether the counting allocator is compiled in.
pub const fn instrumentation_enabled() -> bool {
    cfg!(feature = "count-alloc")
}

#[cfg(feature = "count-alloc")]
mod counting {
    use std::alloc::{GlobalAlloc, Layout, System};
    use std::cell::Cell;

    thread_local! {
        static ALLOC_EVENTS: Cell<u64> = const { Cell::new(0) };
        static LIVE_BYTES: Cell<u64> = const { Cell::new(0) };
        static PEAK_BYTES: Cell<u64> = const { Cell::new(0) };
    }

    pub(super) fn events() -> u64 {
        ALLOC_EVENTS.with(Cell::get)
    }

    pub(super) fn live_bytes() -> u64 {
        LIVE_BYTES.with(Cell::get)
    }

    pub(super) fn peak_bytes() -> u64 {
        PEAK_BYTES.with(Cell::get)
    }

    pub(super) fn set_peak(value: u64) {
        PEAK_BYTES.with(|p| p.set(value));
    }

    fn on_alloc(size: usize) {
        // try_with: the allocator may be called during thread teardown.
        let _ = ALLOC_EVENTS.try_with(|c| c.set(c.get() + 1));
        let _ = LIVE_BYTES.try_with(|c| {
            let live = c.get() + size as u64;
            c.set(live);
            let _ = PEAK_BYTES.try_with(|p| {
                if live > p.get() {
                    p.set(live);
                }
            });
        });
    }

    fn on_dealloc(size: usize) {
        let _ = LIVE_BYTES.try_with(|c| c.set(c.get().saturating_sub(size as u64)));
    }

    struct CountingAllocator;

    unsafe impl GlobalAlloc for CountingAllocator {
        unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
            let ptr = System.alloc(layout);
            if !ptr.is_null() {
                on_alloc(layout.size());
            }
            ptr
        }

        unsafe fn alloc_zeroed(&self, layout: Layout) -> *mut u8 {
            let ptr = System.alloc_zeroed(layout);
            if !ptr.is_null() {
                on_alloc(layout.size());
            }
            ptr
        }

        unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
            System.dealloc(ptr, layout);
            on_dealloc(layout.size());
        }

        unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
            let new_ptr = System.realloc(ptr, layout, new_size);
            if !new_ptr.is_null() {
                on_dealloc(layout.size());
                on_alloc(new_size);
            }
            new_ptr
        }
    }

    #[global_allocator]
    static GLOBAL: CountingAllocator = CountingAllocator;
}

/// Runs `f` and reports the allocation events and peak byte growth it caused
/// on the current thread. Returns `None` when instrumentation is compiled out.
pub fn track_scope<T>(f: impl FnOnce() -> T) -> (T, Option<ScopeTotals>) {
    #[cfg(feature = "count-alloc")]
    {
        let events_before = counting::events();
        let live_before = counting::live_bytes();
        let peak_before = counting::peak_bytes();
        // Rebase the high-water mark so the scope measures its own growth.
        counting::set_peak(counting::live_bytes());

        let value = f();

        let scope_peak = counting::peak_bytes().saturating_sub(live_before);
        counting::set_peak(peak_before.max(counting::peak_bytes()));
        let totals = ScopeTotals {
            alloc_events: counting::events() - events_before,
            peak_bytes: scope_peak,
        };
        (value, Some(totals))
    }
    #[cfg(not(feature = "count-alloc"))]
    {
        (f(), None)
    }
}

#[cfg(all(test, feature = "count-alloc"))]
mod tests {
    use super::*;

    #[test]
    fn counts_vector_allocations() {
        let (_, totals) = track_scope(|| {
            let v: Vec<u64> = Vec::with_capacity(32);
            std::hint::black_box(&v);
        });
        let totals = totals.expect("instrumentation enabled");
        assert_eq!(totals.alloc_events, 1);
        assert!(totals.peak_bytes >= 32 * 8);
    }

    #[test]
    fn empty_scope_counts_nothing() {
        let (_, totals) = track_scope(|| {});
        let totals = totals.expect("instrumentation enabled");
        assert_eq!(totals.alloc_events, 0);
        assert_eq!(totals.peak_bytes, 0);
    }

    #[test]
    fn growth_counts_as_new_events() {
        let (_, totals) = track_scope(|| {
            let mut v: Vec<u8> = Vec::new();
            for i in 0..4096 {
                v.push(i as u8);
            }
            std::hint::black_box(&v);
        });
        let totals = totals.expect("instrumentation enabled");
        assert!(totals.alloc_events >= 2, "growing vec must reallocate");
        assert!(totals.peak_bytes >= 4096);
    }
}
