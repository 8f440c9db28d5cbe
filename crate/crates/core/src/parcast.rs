//! Chunked, order-preserving parallel element transforms.
//!
//! Work is split statically into at most `threads` contiguous ranges. The
//! calling thread processes the first range itself and one scoped worker is
//! spawned for each remaining range. Inputs shorter than `min_chunk` run
//! serially without spawning anything. Because every element lands in the
//! same output slot regardless of the split, results are bitwise identical
//! for every thread count.
//!
//! The process-wide thread count follows the usual precedence: an explicit
//! [`set_thread_count`] wins, then the `DOTCALL64_THREADS` environment
//! variable, then the hardware parallelism.

use std::mem::MaybeUninit;
use std::ops::Range;
use std::cell::Cell;
use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

pub const THREADS_ENV: &str = "DOTCALL64_THREADS";
pub const DEFAULT_MIN_CHUNK: usize = 1 << 16;

static THREAD_OVERRIDE: AtomicUsize = AtomicUsize::new(0);

thread_local! {
    static SPAWNED: Cell<u64> = const { Cell::new(0) };
}

fn note_spawn() {
    SPAWNED.with(|c| c.set(c.get() + 1));
}

/// Overrides the thread count for every [`WorkerConfig::default`] created afterwards.
pub fn set_thread_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::spec("thread count must be at least 1"));
    }
    THREAD_OVERRIDE.store(n, Ordering::SeqCst);
    Ok(())
}

/// Drops an explicit override so the environment and hardware defaults apply again.
pub fn clear_thread_count() {
    THREAD_OVERRIDE.store(0, Ordering::SeqCst);
}

pub fn effective_thread_count() -> usize {
    let explicit = match THREAD_OVERRIDE.load(Ordering::SeqCst) {
        0 => None,
        n => Some(n),
    };
    let env = std::env::var(THREADS_ENV).ok();
    let hardware = std::thread::available_parallelism().map_or(1, |n| n.get());
    resolve_thread_count(explicit, env.as_deref(), hardware)
}

/// Precedence rule behind [`effective_thread_count`]. Unparsable or zero
/// environment values are ignored.
pub fn resolve_thread_count(explicit: Option<usize>, env: Option<&str>, hardware: usize) -> usize {
    explicit
        .or_else(|| {
            env.and_then(|s| s.trim().parse::<usize>().ok())
                .filter(|&n| n > 0)
        })
        .unwrap_or(hardware.max(1))
}

/// Number of worker threads spawned on behalf of the calling thread.
pub fn spawned_workers() -> u64 {
    SPAWNED.with(Cell::get)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WorkerConfig {
    threads: usize,
    min_chunk: usize,
}

impl Default for WorkerConfig {
    fn default() -> Self {
        WorkerConfig {
            threads: effective_thread_count(),
            min_chunk: DEFAULT_MIN_CHUNK,
        }
    }
}

impl WorkerConfig {
    pub fn new(threads: usize, min_chunk: usize) -> Result<Self> {
        if threads == 0 {
            return Err(Error::spec("thread count must be at least 1"));
        }
        if min_chunk == 0 {
            return Err(Error::spec("min_chunk must be at least 1"));
        }
        Ok(WorkerConfig { threads, min_chunk })
    }

    pub fn serial() -> Self {
        WorkerConfig {
            threads: 1,
            min_chunk: DEFAULT_MIN_CHUNK,
        }
    }

    pub fn with_threads(self, threads: usize) -> Result<Self> {
        WorkerConfig::new(threads, self.min_chunk)
    }

    pub fn with_min_chunk(self, min_chunk: usize) -> Result<Self> {
        WorkerConfig::new(self.threads, min_chunk)
    }

    pub fn threads(&self) -> usize {
        self.threads
    }

    pub fn min_chunk(&self) -> usize {
        self.min_chunk
    }

    /// Contiguous ranges covering `0..len`, one per participating thread.
    #[allow(clippy::single_range_in_vec_init)]
    pub fn partition(&self, len: usize) -> Vec<Range<usize>> {
        if len == 0 {
            return vec![0..0];
        }
        if len < self.min_chunk || self.threads == 1 {
            return vec![0..len];
        }
        let parts = self.threads.min(len.div_ceil(self.min_chunk));
        let base = len / parts;
        let extra = len % parts;
        let mut start = 0;
        (0..parts)
            .map(|i| {
                let size = base + usize::from(i < extra);
                let r = start..start + size;
                start += size;
                r
            })
            .collect()
    }
}

/// Runs `work` once per partition of `src` and returns the results in
/// partition order. `work` receives the offset of the chunk within `src`.
pub fn parallel_chunks<T, R, F>(src: &[T], cfg: &WorkerConfig, work: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(usize, &[T]) -> R + Sync,
{
    let ranges = cfg.partition(src.len());
    if ranges.len() == 1 {
        return vec![work(0, src)];
    }
    let work = &work;
    std::thread::scope(|scope| {
        let handles: Vec<_> = ranges[1..]
            .iter()
            .map(|r| {
                note_spawn();
                let chunk = &src[r.clone()];
                let offset = r.start;
                scope.spawn(move || work(offset, chunk))
            })
            .collect();
        let first = work(0, &src[ranges[0].clone()]);
        let mut out = Vec::with_capacity(ranges.len());
        out.push(first);
        for h in handles {
            out.push(h.join().unwrap_or_else(|p| std::panic::resume_unwind(p)));
        }
        out
    })
}

/// Applies `f` to every element of `src`, writing results in order.
///
/// On failure returns the error of the smallest failing index, together
/// with that index, independent of the thread count.
pub fn parallel_map<T, U, E, F>(src: &[T], f: F, cfg: &WorkerConfig) -> Result<Vec<U>, (usize, E)>
where
    T: Copy + Sync,
    U: Send,
    E: Send,
    F: Fn(T) -> Result<U, E> + Sync,
{
    let n = src.len();
    let mut dst: Vec<U> = Vec::with_capacity(n);
    let ranges = cfg.partition(n);

    let outcome = {
        let mut spare: &mut [MaybeUninit<U>] = &mut dst.spare_capacity_mut()[..n];
        let mut pieces = Vec::with_capacity(ranges.len());
        for r in &ranges {
            let (head, tail) = spare.split_at_mut(r.len());
            pieces.push((r.start, &src[r.clone()], head));
            spare = tail;
        }
        let f = &f;
        let fill = move |(offset, input, out): (usize, &[T], &mut [MaybeUninit<U>])| {
            for (i, (s, d)) in input.iter().zip(out.iter_mut()).enumerate() {
                match f(*s) {
                    Ok(v) => {
                        d.write(v);
                    }
                    Err(e) => return Err((offset + i, e)),
                }
            }
            Ok(())
        };

        if pieces.len() == 1 {
            vec![fill(pieces.pop().unwrap())]
        } else {
            std::thread::scope(|scope| {
                let mut it = pieces.into_iter();
                let first = it.next().unwrap();
                let handles: Vec<_> = it
                    .map(|p| {
                        note_spawn();
                        scope.spawn(move || fill(p))
                    })
                    .collect();
                let mut out = vec![fill(first)];
                for h in handles {
                    out.push(h.join().unwrap_or_else(|p| std::panic::resume_unwind(p)));
                }
                out
            })
        }
    };

    // Chunks are in index order and each stops at its own first error, so
    // the first error found here carries the globally smallest index.
    if let Some(err) = outcome.into_iter().find_map(Result::err) {
        return Err(err);
    }
    // SAFETY: every slot in 0..n was written by exactly one chunk.
    unsafe { dst.set_len(n) };
    Ok(dst)
}

/// Smallest index whose element satisfies `pred`.
pub fn parallel_find_first<T, F>(src: &[T], pred: F, cfg: &WorkerConfig) -> Option<usize>
where
    T: Sync,
    F: Fn(&T) -> bool + Sync,
{
    parallel_chunks(src, cfg, |offset, chunk| {
        chunk.iter().position(&pred).map(|i| offset + i)
    })
    .into_iter()
    .flatten()
    .next()
}

/// Number of elements satisfying `pred`, together with the first such index.
pub fn parallel_count<T, F>(src: &[T], pred: F, cfg: &WorkerConfig) -> (u64, Option<usize>)
where
    T: Sync,
    F: Fn(&T) -> bool + Sync,
{
    parallel_chunks(src, cfg, |offset, chunk| {
        let mut count = 0u64;
        let mut first = None;
        for (i, x) in chunk.iter().enumerate() {
            if pred(x) {
                count += 1;
                first.get_or_insert(offset + i);
            }
        }
        (count, first)
    })
    .into_iter()
    .fold((0, None), |(c, f), (cc, ff)| (c + cc, f.or(ff)))
}
