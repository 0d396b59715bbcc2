#pragma once

#include "spiq/circuit.hpp"
#include "spiq/hamiltonian.hpp"
#include "spiq/io.hpp"
#include "spiq/metrics.hpp"
#include "spiq/pipeline.hpp"
#include "spiq/pipeline_config.hpp"
#include "spiq/search.hpp"
#include "spiq/selection.hpp"
#include "spiq/stabilizer.hpp"
#include "spiq/statevector.hpp"
#include "spiq/tuner.hpp"
