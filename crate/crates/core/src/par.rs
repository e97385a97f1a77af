// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Ordered search over index ranges, parallel when the `parallel` feature
//! is enabled.

/// How independent work items are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses the current rayon pool; identical to `Sequential` when the
    /// crate is built without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// First index in `items` (in order) for which `f` yields a value.
    /// The answer does not depend on the schedule.
    pub fn find_first<I, T, F>(self, items: &[I], f: F) -> Option<T>
    where
        I: Sync,
        T: Send,
        F: Fn(&I) -> Option<T> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().find_map_first(f)
            }
            _ => items.iter().find_map(f),
        }
    }

    /// Maps `f` over `items`, preserving order.
    pub fn map<I, T, F>(self, items: &[I], f: F) -> Vec<T>
    where
        I: Sync,
        T: Send,
        F: Fn(&I) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }
}

/// Runs `f` inside a pool of `workers` threads. Without the `parallel`
/// feature this simply calls `f`.
pub fn with_workers<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    if let Some(n) = workers {
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            return pool.install(f);
        }
    }
    let _ = workers;
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_match_is_schedule_independent() {
        let items: Vec<u32> = (0..10_000).collect();
        let pick = |&x: &u32| (x % 977 == 500).then_some(x);
        assert_eq!(Execution::Parallel.find_first(&items, pick), Some(500));
        assert_eq!(Execution::Sequential.find_first(&items, pick), Some(500));
        assert_eq!(with_workers(Some(2), || Execution::Parallel.map(&items[..3], |x| x * 2)), vec![0, 2, 4]);
    }
}
