#pragma once

#include "qiseg/circuit.hpp"
#include "qiseg/comparator.hpp"
#include "qiseg/cost.hpp"
#include "qiseg/error.hpp"
#include "qiseg/image.hpp"
#include "qiseg/neqr.hpp"
#include "qiseg/qasm.hpp"
#include "qiseg/segmentation.hpp"
#include "qiseg/statevector.hpp"
#include "qiseg/tracked.hpp"
