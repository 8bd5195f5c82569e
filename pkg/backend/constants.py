TIMESERIES_COLUMNS = [
    't',
    'alpha',
    'E',
    'S',
    'dE_dt',
    'dSE_dt_theorem',
    'dSE_dt_fd',
    'dSE_dt_omega',
    'curv_sq_integral',
    'area',
    'M1_re',
    'M1_im',
    'M2_re',
    'M2_im',
    'min_abs_fprime',
    'pg_residual'
]

BOUNDARY_COLUMNS = ['theta', 'x', 'y', 'kappa']

SUMMARY_SCHEMA_VERSION = 1

COMPLETED = 'Completed'
CUSP_STOP = 'CuspStop'
ERROR = 'Error'

LAPLACIAN_GROWTH = 'laplacian-growth'
CUSTOM = 'custom'

# Float format of every number written to disk
FLOAT_FORMAT = '%.17g'

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CUSP = 2
