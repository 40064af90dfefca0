#pragma once

#include <stdexcept>

namespace pcmrbm {

// Bad configuration, CLI mapping: exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Array initialization produced zero spread in G+ - G-; the caller must
// supply an explicit s_norm override.
struct ZeroSpread : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact enumeration guard exceeded.
struct TooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Missing-pixel enumeration guard exceeded.
struct TooManyMissing : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested pattern count outside the valid range.
struct OutOfRange : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace pcmrbm
