#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace strent {

enum class Errc {
    EmptyBlock,
    Overlap,
    Missing,
    OutOfRange,
    DimensionMismatch,
    InvalidDistribution,
    InvalidWeights,
    NonFiniteInput,
    DisconnectedGraph,
    NonDivisibleWindow,
    IncompleteLevelMap,
    DegenerateDataset,
    InvalidConfig,
    ParseError,
};

std::string_view errc_name(Errc code) noexcept;

// All library failures are reported through this type. `index()` carries the
// offending class/vertex/line number when one is meaningful.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what, std::optional<std::size_t> index = std::nullopt);

    Errc code() const noexcept { return code_; }
    std::optional<std::size_t> index() const noexcept { return index_; }

private:
    Errc code_;
    std::optional<std::size_t> index_;
};

}  // namespace strent
