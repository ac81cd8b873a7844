import colorama as col
import os
import sys

class Logger:
   """
Class-level logger of the equiweight command line.

Progress lines go to stderr so that reports on stdout stay machine readable;
every line is mirrored into the log file when one is configured.
   """
   output_logfile = None
   output_console = True
   color_normal   = col.Fore.WHITE + col.Style.NORMAL
   color_ok       = col.Fore.GREEN + col.Style.BRIGHT
   color_error    = col.Fore.RED + col.Style.BRIGHT
   color_warn     = col.Fore.YELLOW + col.Style.BRIGHT
   color_reset    = col.Style.RESET_ALL + col.Fore.RESET + col.Back.RESET
   prefix_warn    = "WARN: "
   prefix_error   = "ERROR: "
   prefix_fatalerror = "FATAL ERROR: "

   @classmethod
   def config(cls, output_console=True, output_logfile=None):
      """
Set the outputs of all following log calls.

**Arguments:**

*  ``output_console``

   / *Condition*: optional / *Type*: bool / *Default*: True /

   Write progress lines to stderr. ``--quiet`` turns this off.

*  ``output_logfile``

   / *Condition*: optional / *Type*: str / *Default*: None /

   Log file, truncated here.
      """
      cls.output_console = output_console
      cls.output_logfile = output_logfile
      if cls.output_logfile:
         with open(cls.output_logfile, 'w', encoding='utf-8'):
            pass

   @classmethod
   def log(cls, msg='', color=None, indent=0):
      """
Write ``msg``, each of its lines shifted by ``indent`` spaces.
      """
      if color is None:
         color = cls.color_normal
      lines = [" "*indent + line for line in str(msg).split("\n")]
      if cls.output_console:
         for line in lines:
            print(cls.color_reset + color + line + cls.color_reset, file=sys.stderr)
      if cls.output_logfile and os.path.isfile(cls.output_logfile):
         with open(cls.output_logfile, 'a', encoding='utf-8') as f:
            f.writelines(line + "\n" for line in lines)

   @classmethod
   def log_warning(cls, msg, indent=0):
      cls.log(cls.prefix_warn + str(msg), cls.color_warn, indent)

   @classmethod
   def log_error(cls, msg, fatal_error=False, indent=0, exit_code=1):
      """
Write an error message. A fatal error stops the program.

**Arguments:**

*  ``msg``

   / *Condition*: required / *Type*: str /

   Error message.

*  ``fatal_error``

   / *Condition*: optional / *Type*: bool / *Default*: False /

   Raise ``SystemExit(exit_code)`` after logging.

*  ``exit_code``

   / *Condition*: optional / *Type*: int / *Default*: 1 /

   ``2`` for invalid input, ``1`` for a failed check.

**Raises:**

*  ``SystemExit``

   When ``fatal_error`` is set.
      """
      prefix = cls.prefix_fatalerror if fatal_error else cls.prefix_error
      # errors are printed even with --quiet
      console = cls.output_console
      cls.output_console = True
      try:
         cls.log(prefix + str(msg), cls.color_error, indent)
         if fatal_error:
            cls.log(f"{os.path.basename(sys.argv[0])} has been stopped!", cls.color_error)
      finally:
         cls.output_console = console
      if fatal_error:
         raise SystemExit(exit_code)
