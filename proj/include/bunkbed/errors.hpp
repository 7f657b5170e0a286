#pragma once

#include <stdexcept>
#include <string>

namespace bunkbed {

// Failure categories surfaced across the library. The CLI maps these to
// process exit codes: validation failures -> 2, resource cap -> 3.
enum class errc {
    self_loop,
    duplicate_edge,
    label_out_of_range,
    invalid_parameters,
    too_large,
    empty_transversal_set,
    disconnected_terminals,
    not_a_forest,
};

inline const char* errc_name(errc code) {
    switch (code) {
        case errc::self_loop: return "SelfLoop";
        case errc::duplicate_edge: return "DuplicateEdge";
        case errc::label_out_of_range: return "LabelOutOfRange";
        case errc::invalid_parameters: return "InvalidParameters";
        case errc::too_large: return "TooLarge";
        case errc::empty_transversal_set: return "EmptyH";
        case errc::disconnected_terminals: return "DisconnectedTerminals";
        case errc::not_a_forest: return "NotAForest";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message),
          code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

}  // namespace bunkbed
