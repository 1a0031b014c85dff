#pragma once

namespace dephasim {

// Thread cap requested through DEPHASIM_THREADS; 0 when unset, empty or invalid.
int thread_cap_from_env();

// Applies a cap to the OpenMP runtime. 0 keeps the runtime default.
void set_thread_cap(int threads);

int max_threads();

}  // namespace dephasim
