//! Data-parallel helpers. With the `parallel` feature the work is spread over
//! the rayon pool when the config asks for it; otherwise everything runs
//! sequentially. Output order never depends on the schedule.

/// Engine-wide settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    /// Largest cube dimension the engine will enumerate.
    pub cube_cap: usize,
    /// Use the rayon pool for enumeration, matrix assembly and per-degree reduction.
    pub parallel: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            cube_cap: 4,
            parallel: cfg!(feature = "parallel"),
        }
    }
}

impl EngineConfig {
    pub fn sequential() -> Self {
        EngineConfig {
            parallel: false,
            ..Self::default()
        }
    }

    pub fn with_cube_cap(self, cube_cap: usize) -> Self {
        EngineConfig { cube_cap, ..self }
    }
}

#[cfg(feature = "parallel")]
pub(crate) fn map<T, R, F>(cfg: &EngineConfig, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    if cfg.parallel && items.len() > 1 {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map<T, R, F>(_cfg: &EngineConfig, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

pub(crate) fn map_range<R, F>(cfg: &EngineConfig, len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    let idx: Vec<usize> = (0..len).collect();
    map(cfg, &idx, |&i| f(i))
}
