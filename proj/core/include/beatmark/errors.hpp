#pragma once

#include <stdexcept>
#include <string>

namespace beatmark {

// Error families. Each maps to a distinct process exit code in the CLI.
enum class ErrorFamily {
  kInput,       // unreadable or malformed input files
  kDuration,    // record shorter than the minimum analysable length
  kTestRegion,  // test-region selection problems
  kIo,          // output write failures
  kSession,     // session import/export problems
  kState,       // inconsistent in-memory state (caller bug or corrupt edit)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorFamily family, std::string code, const std::string& what)
      : std::runtime_error(what), family_(family), code_(std::move(code)) {}

  ErrorFamily family() const noexcept { return family_; }
  // Short machine-readable name, e.g. "UnreadableHeader".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorFamily family_;
  std::string code_;
};

#define BEATMARK_DEFINE_ERROR(Name, Family)                  \
  class Name : public Error {                                \
   public:                                                   \
    explicit Name(const std::string& what)                   \
        : Error(ErrorFamily::Family, #Name, #Name ": " + what) {} \
  }

BEATMARK_DEFINE_ERROR(UnreadableHeader, kInput);
BEATMARK_DEFINE_ERROR(MissingSampleRate, kInput);
BEATMARK_DEFINE_ERROR(UnsupportedFormat, kInput);
BEATMARK_DEFINE_ERROR(EmptyRecord, kInput);
BEATMARK_DEFINE_ERROR(MalformedAnnotation, kInput);
BEATMARK_DEFINE_ERROR(EmptySignal, kInput);
BEATMARK_DEFINE_ERROR(NoSamples, kInput);

BEATMARK_DEFINE_ERROR(MinimumDurationError, kDuration);

BEATMARK_DEFINE_ERROR(DurationTooLong, kTestRegion);
BEATMARK_DEFINE_ERROR(NoSavedRegion, kTestRegion);

BEATMARK_DEFINE_ERROR(IoError, kIo);

BEATMARK_DEFINE_ERROR(VersionMismatch, kSession);
BEATMARK_DEFINE_ERROR(CorruptSession, kSession);

BEATMARK_DEFINE_ERROR(OverlappingRegions, kState);
BEATMARK_DEFINE_ERROR(EmptyWindow, kState);
BEATMARK_DEFINE_ERROR(IneligibleInterval, kState);
BEATMARK_DEFINE_ERROR(NotAPair, kState);
BEATMARK_DEFINE_ERROR(WindowOutOfRange, kState);
BEATMARK_DEFINE_ERROR(InvalidArgument, kState);

#undef BEATMARK_DEFINE_ERROR

// Process exit code for an error family; 0 is reserved for success, 1 for
// unexpected failures and 2 for command-line usage errors.
int exit_code(ErrorFamily family) noexcept;

}  // namespace beatmark
