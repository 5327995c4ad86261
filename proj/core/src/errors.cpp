#include "beatmark/errors.hpp"

namespace beatmark {

int exit_code(ErrorFamily family) noexcept {
  switch (family) {
    case ErrorFamily::kInput: return 3;
    case ErrorFamily::kDuration: return 4;
    case ErrorFamily::kTestRegion: return 5;
    case ErrorFamily::kIo: return 6;
    case ErrorFamily::kSession: return 7;
    case ErrorFamily::kState: return 8;
  }
  return 1;
}

}  // namespace beatmark
