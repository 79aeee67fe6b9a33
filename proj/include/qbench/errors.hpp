#pragma once

#include <stdexcept>
#include <string>

namespace qbench {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define QBENCH_ERROR(NAME)                       \
    struct NAME : Error {                        \
        using Error::Error;                      \
    }

QBENCH_ERROR(NoPath);
QBENCH_ERROR(WidthExceeded);
QBENCH_ERROR(ZeroBranch);
QBENCH_ERROR(EmptyHistogram);
QBENCH_ERROR(MissingSetting);
QBENCH_ERROR(IncompleteCoverage);
QBENCH_ERROR(ResolutionMismatch);
QBENCH_ERROR(NormViolation);
QBENCH_ERROR(IncompleteBatch);
QBENCH_ERROR(DegenerateSigmas);
QBENCH_ERROR(NoConvergence);
QBENCH_ERROR(InsufficientPoints);
QBENCH_ERROR(MissingBenchmark);
QBENCH_ERROR(Timeout);
QBENCH_ERROR(MalformedJob);
QBENCH_ERROR(MissingData);
QBENCH_ERROR(InvalidConfig);

#undef QBENCH_ERROR

}  // namespace qbench
