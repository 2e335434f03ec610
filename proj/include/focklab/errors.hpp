#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace focklab {

/// Domain error with a stable machine-readable name ("DivergentTail",
/// "NonpositiveLaplacian", ...). The CLI prints the name on stderr and
/// exits 1; tests match on name() rather than the message text.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

[[noreturn]] inline void raise(std::string name, const std::string& what) {
    throw Error(std::move(name), what);
}

} // namespace focklab
