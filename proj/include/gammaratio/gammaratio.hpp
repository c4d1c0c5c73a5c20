#pragma once

#include "gammaratio/coefficients.hpp"
#include "gammaratio/compensated.hpp"
#include "gammaratio/errors.hpp"
#include "gammaratio/expansion.hpp"
#include "gammaratio/kernels.hpp"
#include "gammaratio/validation.hpp"
