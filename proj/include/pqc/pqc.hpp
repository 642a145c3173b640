#pragma once

// Umbrella header.

#include "pqc/error.hpp"
#include "pqc/modular.hpp"
#include "pqc/zsqrt2.hpp"
#include "pqc/realquad.hpp"
#include "pqc/formclass.hpp"
#include "pqc/criteria.hpp"
#include "pqc/batch.hpp"
