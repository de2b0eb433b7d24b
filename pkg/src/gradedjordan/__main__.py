from gradedjordan.cli import main
import sys
sys.exit(main())
