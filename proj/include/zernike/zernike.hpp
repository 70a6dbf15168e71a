#pragma once

#include "zernike/gaussian_rational.hpp"
#include "zernike/monomial.hpp"
#include "zernike/polynomial.hpp"
#include "zernike/phase_space.hpp"
#include "zernike/text_form.hpp"
#include "zernike/linear_solver.hpp"
#include "zernike/sampling.hpp"
#include "zernike/system_spec.hpp"
#include "zernike/classical_integrals.hpp"
#include "zernike/classical_symmetry.hpp"
#include "zernike/operator_polynomial.hpp"
#include "zernike/quantum_system.hpp"
#include "zernike/quantum_spectra.hpp"
#include "zernike/dynamics.hpp"
