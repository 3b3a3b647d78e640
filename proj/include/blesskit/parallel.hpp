#pragma once

namespace blesskit {

/// Worker thread cap: BLESSKIT_THREADS when set to a positive integer,
/// otherwise the hardware concurrency (at least 1).
int thread_count();

/// Overrides the cap for the current process (0 restores the default).
void set_thread_count(int threads);

}  // namespace blesskit
