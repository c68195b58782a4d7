from regmaps.cli import main

raise SystemExit(main())
