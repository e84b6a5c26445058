#pragma once

#include "qpwalk/catalog.hpp"
#include "qpwalk/compensation.hpp"
#include "qpwalk/errors.hpp"
#include "qpwalk/kernel.hpp"
#include "qpwalk/model.hpp"
#include "qpwalk/model_io.hpp"
#include "qpwalk/oracle.hpp"
#include "qpwalk/spectral.hpp"
#include "qpwalk/stability.hpp"
