#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace tailscope {

// Raised for every contract violation and degenerate input in the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Wraps an Error with the name of the pipeline stage that produced it.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what)
        : Error(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace tailscope
