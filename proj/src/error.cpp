#include "strent/error.hpp"

namespace strent {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::EmptyBlock: return "EmptyBlock";
        case Errc::Overlap: return "Overlap";
        case Errc::Missing: return "Missing";
        case Errc::OutOfRange: return "OutOfRange";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::InvalidDistribution: return "InvalidDistribution";
        case Errc::InvalidWeights: return "InvalidWeights";
        case Errc::NonFiniteInput: return "NonFiniteInput";
        case Errc::DisconnectedGraph: return "DisconnectedGraph";
        case Errc::NonDivisibleWindow: return "NonDivisibleWindow";
        case Errc::IncompleteLevelMap: return "IncompleteLevelMap";
        case Errc::DegenerateDataset: return "DegenerateDataset";
        case Errc::InvalidConfig: return "InvalidConfig";
        case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& what, std::optional<std::size_t> index)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), index_(index) {}

}  // namespace strent
