#include "ancestree/errors.hpp"

namespace ancestree {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::MutationRequired: return "MutationRequired";
    case Errc::SelectionRequired: return "SelectionRequired";
    case Errc::UseClosedForm: return "UseClosedForm";
    case Errc::StepTooLarge: return "StepTooLarge";
    case Errc::TooManyLines: return "TooManyLines";
    case Errc::PrecisionLoss: return "PrecisionLoss";
    case Errc::EventCapExceeded: return "EventCapExceeded";
    case Errc::PathExplosion: return "PathExplosion";
    case Errc::ReplicaTimeout: return "ReplicaTimeout";
    case Errc::NotMonotone: return "NotMonotone";
    case Errc::InternalError: return "InternalError";
  }
  return "UnknownError";
}

int errc_exit_category(Errc c) {
  switch (c) {
    case Errc::InvalidArgument:
    case Errc::MutationRequired:
    case Errc::SelectionRequired:
    case Errc::UseClosedForm:
    case Errc::StepTooLarge:
    case Errc::TooManyLines:
      return 1;
    case Errc::PrecisionLoss:
    case Errc::EventCapExceeded:
    case Errc::PathExplosion:
    case Errc::ReplicaTimeout:
      return 2;
    case Errc::NotMonotone:
    case Errc::InternalError:
      return 3;
  }
  return 3;
}

}  // namespace ancestree
