#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wfmpc {

// Bumped whenever the on-disk dataset or checkpoint layout changes.
inline constexpr int kFormatMajor = 1;
inline constexpr int kFormatMinor = 0;

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

class InstabilityError : public std::runtime_error {
public:
    explicit InstabilityError(const std::string& what) : std::runtime_error(what) {}
};

class TrainingError : public std::runtime_error {
public:
    explicit TrainingError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

class VersionMismatchError : public IoError {
public:
    explicit VersionMismatchError(const std::string& what) : IoError(what) {}
};

class TruncatedFileError : public IoError {
public:
    explicit TruncatedFileError(const std::string& what) : IoError(what) {}
};

class ChecksumError : public IoError {
public:
    explicit ChecksumError(const std::string& what) : IoError(what) {}
};

// Derives an independent RNG seed for a named stream so that components
// (excitation, net init, batch sampling, ...) never share a sequence.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    // splitmix64 finalizer
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace wfmpc
