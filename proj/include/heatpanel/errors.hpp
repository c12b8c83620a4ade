#pragma once

#include <stdexcept>
#include <string>

namespace heatpanel {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HEATPANEL_DEFINE_ERROR(Name) \
  class Name final : public Error {  \
   public:                           \
    using Error::Error;              \
  };

// I/O and parsing
HEATPANEL_DEFINE_ERROR(IoError)
HEATPANEL_DEFINE_ERROR(MissingColumnError)
HEATPANEL_DEFINE_ERROR(DuplicateKeyError)
HEATPANEL_DEFINE_ERROR(ParseError)
HEATPANEL_DEFINE_ERROR(InvalidParameterError)

// heat indicators
HEATPANEL_DEFINE_ERROR(UnknownMunicipalityError)
HEATPANEL_DEFINE_ERROR(MissingCellError)
HEATPANEL_DEFINE_ERROR(InvalidExtremaError)
HEATPANEL_DEFINE_ERROR(WrongWeekLengthError)

// aggregation
HEATPANEL_DEFINE_ERROR(ZeroTotalPopulationError)
HEATPANEL_DEFINE_ERROR(UnmappedMunicipalityError)

// greenness
HEATPANEL_DEFINE_ERROR(EmptyResidentialAreaError)
HEATPANEL_DEFINE_ERROR(UnknownClassCodeError)
HEATPANEL_DEFINE_ERROR(DegenerateVarianceError)

// regression
HEATPANEL_DEFINE_ERROR(UnknownColumnError)
HEATPANEL_DEFINE_ERROR(RankWouldBeZeroError)
HEATPANEL_DEFINE_ERROR(NoConvergenceError)
HEATPANEL_DEFINE_ERROR(PerfectCollinearityAllError)
HEATPANEL_DEFINE_ERROR(TooFewClustersError)
HEATPANEL_DEFINE_ERROR(NonAlignedDesignError)
HEATPANEL_DEFINE_ERROR(InvalidModelSpecError)
HEATPANEL_DEFINE_ERROR(MissingInteractionTermError)

// forecasting
HEATPANEL_DEFINE_ERROR(EmptyBaselineError)
HEATPANEL_DEFINE_ERROR(DistrictMismatchError)

#undef HEATPANEL_DEFINE_ERROR

}  // namespace heatpanel
