#pragma once

#include <stdexcept>
#include <string>

namespace lcq {

// Input violated an operation contract (bad dimensions, bad values).
class validation_error : public std::invalid_argument {
  public:
    explicit validation_error(const std::string &what)
        : std::invalid_argument(what) {}
};

// Qubit or matrix index out of range.
class index_error : public std::out_of_range {
  public:
    explicit index_error(const std::string &what) : std::out_of_range(what) {}
};

// File ingestion failure; the message lists the offending lines.
class load_error : public std::runtime_error {
  public:
    explicit load_error(const std::string &what) : std::runtime_error(what) {}
};

// Runtime switch for the heavier numerical checks (unitarity of gates,
// density-matrix sanity, PSD assertions). Dimension and range checks always
// run. Defaults to on in debug builds and off in release builds; tests turn
// it on explicitly.
void set_validation(bool on);
bool validation_enabled();

} // namespace lcq
