#pragma once

#include <stdexcept>
#include <string>

namespace spinlab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define SPINLAB_DEFINE_ERROR(Name)              \
  struct Name : Error {                         \
    using Error::Error;                         \
  }

SPINLAB_DEFINE_ERROR(NonHermitianInput);
SPINLAB_DEFINE_ERROR(DimensionMismatch);
SPINLAB_DEFINE_ERROR(BadSubsystemSpec);
SPINLAB_DEFINE_ERROR(InvalidDensityMatrix);
SPINLAB_DEFINE_ERROR(OutOfRange);
SPINLAB_DEFINE_ERROR(NoNegativeEigenvalue);
SPINLAB_DEFINE_ERROR(NotNormalized);
SPINLAB_DEFINE_ERROR(WrongInitialState);
SPINLAB_DEFINE_ERROR(WrongRegime);
SPINLAB_DEFINE_ERROR(IndexOutOfRange);
SPINLAB_DEFINE_ERROR(TooLarge);
SPINLAB_DEFINE_ERROR(InvalidGeometry);
SPINLAB_DEFINE_ERROR(NoClosedForm);
SPINLAB_DEFINE_ERROR(WrongGeometry);
SPINLAB_DEFINE_ERROR(InvalidPartition);
SPINLAB_DEFINE_ERROR(EvanescentRegime);
SPINLAB_DEFINE_ERROR(ConfigError);
SPINLAB_DEFINE_ERROR(IoError);

#undef SPINLAB_DEFINE_ERROR

}  // namespace spinlab
