#pragma once

#include "glbound/bounds.hpp"
#include "glbound/coefficients.hpp"
#include "glbound/corpus.hpp"
#include "glbound/error.hpp"
#include "glbound/expr.hpp"
#include "glbound/kernel_identity.hpp"
#include "glbound/numeric_core.hpp"
#include "glbound/qclass.hpp"
