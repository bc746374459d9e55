#pragma once

#include "moduli_lab/conjugacy.hpp"
#include "moduli_lab/experiments.hpp"
#include "moduli_lab/family.hpp"
#include "moduli_lab/hopf.hpp"
#include "moduli_lab/jet.hpp"
#include "moduli_lab/mat2.hpp"
#include "moduli_lab/numerics.hpp"
#include "moduli_lab/report.hpp"
#include "moduli_lab/torus.hpp"
