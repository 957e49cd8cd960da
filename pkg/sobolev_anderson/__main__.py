# __main__.py
from sobolev_anderson.cli import main

raise SystemExit(main())
