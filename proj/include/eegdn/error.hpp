#pragma once

#include <stdexcept>
#include <string>

namespace eegdn {

// Error classes map onto the CLI exit-code contract:
//   UsageError/ConfigError -> 1, data/format family -> 2, NumericError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };

class DataError : public Error { using Error::Error; };
class LengthError : public DataError { using DataError::DataError; };
class ShapeError : public DataError { using DataError::DataError; };
class FormatError : public DataError { using DataError::DataError; };
class IoError : public DataError { using DataError::DataError; };
class DegenerateNoiseError : public DataError { using DataError::DataError; };
class DegenerateTruthError : public DataError { using DataError::DataError; };
class DegenerateVarianceError : public DataError { using DataError::DataError; };
class ConstantSignalError : public DataError { using DataError::DataError; };

class NumericError : public Error { using Error::Error; };
class TapeError : public NumericError { using NumericError::NumericError; };

}  // namespace eegdn
