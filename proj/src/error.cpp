#include "pairedk/error.hpp"

namespace pairedk {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::PoleOnCircle: return "PoleOnCircle";
        case ErrorCode::ZeroDenominator: return "ZeroDenominator";
        case ErrorCode::DegreeOverflow: return "DegreeOverflow";
        case ErrorCode::NotInHardySpace: return "NotInHardySpace";
        case ErrorCode::ZeroFunction: return "ZeroFunction";
        case ErrorCode::ZeroOrPoleOnCircle: return "ZeroOrPoleOnCircle";
        case ErrorCode::SymbolNotBounded: return "SymbolNotBounded";
        case ErrorCode::DomainMismatch: return "DomainMismatch";
        case ErrorCode::WindowOverflow: return "WindowOverflow";
        case ErrorCode::DegenerateSymbol: return "DegenerateSymbol";
        case ErrorCode::DegenerateInput: return "DegenerateInput";
        case ErrorCode::TrivialKernel: return "TrivialKernel";
        case ErrorCode::NotInKernel: return "NotInKernel";
        case ErrorCode::PartitionOfUnityFails: return "PartitionOfUnityFails";
        case ErrorCode::NotInner: return "NotInner";
        case ErrorCode::Indeterminate: return "Indeterminate";
        case ErrorCode::UnknownProperty: return "UnknownProperty";
        case ErrorCode::MalformedConfig: return "MalformedConfig";
        case ErrorCode::MalformedSymbol: return "MalformedSymbol";
    }
    return "Unknown";
}

}  // namespace pairedk
