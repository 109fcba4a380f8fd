#pragma once

#include <mutex>

namespace gscap {

// FFTW plan creation/destruction is not thread-safe; all call sites share
// this lock. Plan execution on distinct arrays needs no lock.
inline std::mutex& fftw_lock() {
    static std::mutex m;
    return m;
}

} // namespace gscap
